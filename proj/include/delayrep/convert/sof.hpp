#pragma once

/**
 * @file sof.hpp
 * @brief Closed loop of a plant with delayed inputs under static output feedback u = F y.
 *
 * The plant is
 *   xdot = A0 x + B1 w + sum_i B2_i u(t - tau_i)
 *   z    = C1 x + D12 u
 *   y    = C2 x + D21 w + sum_i D22_i u(t - tau_i)
 * Substituting u = F y gives a recursion in y which no DDE can express; the DDF stores one
 * channel r_i = F y per input delay.
 */

#include "delayrep/core/specs.hpp"

#include <vector>

namespace delayrep {

struct SofPlant {
    std::vector<double> delays;
    Matrix A0, B1, C1, D12, C2, D21;
    std::vector<Matrix> B2;   ///< n x p per delay
    std::vector<Matrix> D22;  ///< r x p per delay

    Index n() const { return A0.rows(); }
    Index m() const { return B1.cols(); }
    Index p() const { return D12.cols(); }
    Index q() const { return C1.rows(); }
    Index r() const { return C2.rows(); }

    /// Throws DimensionError naming the first inconsistent block.
    void check() const;
};

/// The closed loop has no external control input; its u slot keeps dim p with zero blocks.
/// The direct w-to-z term D12 F D21 occupies the DDF's D11 block.
DDFSpec sof_network_to_ddf(const SofPlant& plant, const Matrix& F);

}  // namespace delayrep
