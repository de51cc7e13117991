#pragma once

/**
 * @file discretize.hpp
 * @brief Chebyshev-Gauss-Lobatto collocation of PI operators.
 *
 * A hybrid vector (x, f) with p function components is represented by
 * [x; f_0(s_0..s_{M-1}); ...; f_{p-1}(s_0..s_{M-1})], component-major, with nodes ascending on
 * [-1, 0].  Integrals against the Lagrange basis of the nodes are computed with Gauss-Legendre
 * rules sized for the kernel degree, so for a constant kernel the weights reduce to the
 * Clenshaw-Curtis weights.
 */

#include "delayrep/piops/pi_operator.hpp"

#include <vector>

namespace delayrep {

/// Collocation matrix of size (n_out + p_out M) x (n_in + p_in M).
/// Throws DimensionError when M < 2 or M < degree + 2.
Matrix discretize(const PIOperator& op, std::size_t M);

/// Node samples of a hybrid vector in the layout described above.
Vector sample(const HybridVector& v, std::size_t M);

/// Index of function component c at node j for a vector with finite part of size n.
inline Index node_index(Index n, Index c, std::size_t j, std::size_t M) {
    return n + c * static_cast<Index>(M) + static_cast<Index>(j);
}

}  // namespace delayrep
