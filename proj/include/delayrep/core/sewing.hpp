#pragma once

/**
 * @file sewing.hpp
 * @brief Residuals of the compatibility condition linking channel histories to the initial state.
 *
 * Callers compare the residual norms against a tolerance (kSewingTolerance by default).
 */

#include "delayrep/core/history.hpp"
#include "delayrep/core/specs.hpp"

#include <vector>

namespace delayrep {

inline constexpr double kSewingTolerance = 1e-9;

/// r_i0(0) - C_ri x0 - D_rvi (sum_j C_vj r_j0(-tau_j) + sum_j int C_vdj(s) r_j0(s) ds), per channel.
std::vector<Vector> check_sewing_ddf(const DDFSpec& spec, const Vector& x0, const std::vector<HistoryFunction>& r0);

/// Same condition for transport states phi_i0 on [-1, 0].
std::vector<Vector> check_sewing_odepde(const ODEPDESpec& spec, const Vector& x0,
                                        const std::vector<HistoryFunction>& phi0);

/// Largest infinity norm over the per-channel residuals.
double max_residual(const std::vector<Vector>& residuals);

}  // namespace delayrep
