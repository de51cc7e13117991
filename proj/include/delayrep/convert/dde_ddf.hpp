#pragma once

/**
 * @file dde_ddf.hpp
 * @brief Delay-differential and neutral systems to differential-difference form, and the trivial
 * DDF / ODE-PDE reinterpretation with its history maps.
 */

#include "delayrep/core/history.hpp"
#include "delayrep/core/specs.hpp"

#include <vector>

namespace delayrep {

/// Every delay gets a channel r_i = [x; w; u]; v collects the delayed right-hand-side terms.
DDFSpec dde_to_ddf(const DDESpec& dde);

/// Channels r_i = [x; w; u; xdot]; the last block closes through D_rvi.
DDFSpec nds_to_ddf(const NDSSpec& nds);

ODEPDESpec ddf_to_odepde(const DDFSpec& ddf);
DDFSpec odepde_to_ddf(const ODEPDESpec& odepde);

/// phi_i0(s) = r_i0(tau_i s) on [-1, 0].
std::vector<HistoryFunction> ddf_to_odepde_history(const std::vector<HistoryFunction>& r0,
                                                   const std::vector<double>& delays);
/// r_i0(s) = phi_i0(s / tau_i) on [-tau_i, 0].
std::vector<HistoryFunction> odepde_to_ddf_history(const std::vector<HistoryFunction>& phi0,
                                                   const std::vector<double>& delays);

/// Channel histories r_i0 = [x0; 0; 0] for the DDF produced by dde_to_ddf.
/// x0 must cover [-tau_K, 0].
std::vector<HistoryFunction> dde_channel_histories(const DDESpec& dde, const HistoryFunction& x0);

}  // namespace delayrep
