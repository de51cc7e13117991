#pragma once

/**
 * @file shower.hpp
 * @brief Centralized water-temperature control for N users sharing one supply.
 *
 * State x = [T_1; T_2] (tap positions, then temperatures).  User i reads its own temperature
 * with delay tau_i and the coupling matrix Gamma spreads that delayed reading to every user.
 */

#include "delayrep/core/specs.hpp"

#include <vector>

namespace delayrep {

struct ShowerParams {
    Index N = 1;
    std::vector<double> alpha;  ///< N
    Matrix gamma;               ///< N x N, diagonal unused
    std::vector<double> tau;    ///< N, strictly increasing

    /// alpha_i = 1, gamma_ij = 1/N, tau_i = i.
    static ShowerParams defaults(Index N);
    /// Gamma_ij = gamma_ij alpha_j off the diagonal and -alpha_i on it.
    Matrix Gamma() const;
    /// Throws ValidationError or DimensionError on inconsistent parameters.
    void check() const;
};

/// n = 2N, m = N, p = N, q = 2, r = 0 and K = N; A_i only touches user i's temperature column.
DDESpec build_shower_dde(const ShowerParams& params);
/// One scalar channel per user: r_i = T_2i, v = [r_i(t - tau_i)], B_v = [0; Gamma].
DDFSpec build_shower_ddf(const ShowerParams& params);

}  // namespace delayrep
