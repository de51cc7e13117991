#pragma once

/**
 * @file quadrature.hpp
 * @brief Gauss-Legendre rules, Chebyshev-Gauss-Lobatto nodes on [-1,0], and Lagrange bases.
 */

#include <cstddef>
#include <vector>

namespace delayrep::quad {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped to [a, b]. Exact for degree 2n-1.
Rule gauss_legendre(std::size_t n, double a, double b);

/// Number of Gauss-Legendre nodes exact for a degree-`deg` kernel times a cubic.
inline std::size_t nodes_for_kernel_times_cubic(int deg) {
    return static_cast<std::size_t>((deg + 4 + 1) / 2);
}

/// Chebyshev-Gauss-Lobatto nodes on [-1, 0], ascending: s_0 = -1, s_{M-1} = 0.
std::vector<double> cgl_nodes(std::size_t m);

/// Clenshaw-Curtis weights for the nodes of cgl_nodes(m); they sum to 1.
std::vector<double> clenshaw_curtis_weights(std::size_t m);

/// Barycentric weights for an arbitrary distinct node set.
std::vector<double> barycentric_weights(const std::vector<double>& nodes);

/// Values of every Lagrange basis polynomial of `nodes` at x.
std::vector<double> lagrange_basis(const std::vector<double>& nodes, const std::vector<double>& bary,
                                   double x);

}  // namespace delayrep::quad
