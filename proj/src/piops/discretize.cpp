#include "delayrep/piops/discretize.hpp"

#include "delayrep/core/quadrature.hpp"

#include <string>

namespace delayrep {

namespace {

struct Basis {
    std::vector<double> nodes;
    std::vector<double> bary;
};

// Column (c, k) of int_a^b K(t) l_k(t) dt for every k, written into a row block.
template <typename Kernel>
void integrate_against_basis(const Basis& b, std::size_t gl_nodes, double a, double c0, Kernel&& kern,
                             Eigen::Ref<Matrix> out, Index p_in, std::size_t M) {
    if (c0 <= a) return;
    const auto rule = quad::gauss_legendre(gl_nodes, a, c0);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double t = rule.nodes[q];
        const Matrix k = kern(t);
        const auto l = quad::lagrange_basis(b.nodes, b.bary, t);
        for (Index col = 0; col < p_in; ++col) {
            for (std::size_t j = 0; j < M; ++j) {
                out.col(col * static_cast<Index>(M) + static_cast<Index>(j)) += rule.weights[q] * l[j] * k.col(col);
            }
        }
    }
}

}  // namespace

Matrix discretize(const PIOperator& op, std::size_t M) {
    op.check();
    if (M < 2) throw DimensionError("discretize: need at least two collocation nodes");
    const int deg = op.degree();
    if (static_cast<int>(M) < deg + 2) {
        throw DimensionError("discretize: M = " + std::to_string(M) + " too small for kernel degree " +
                             std::to_string(deg) + " (need M >= " + std::to_string(deg + 2) + ")");
    }
    Basis b;
    b.nodes = quad::cgl_nodes(M);
    b.bary = quad::barycentric_weights(b.nodes);
    const Index Mi = static_cast<Index>(M);
    const Index rows = op.n_out + op.p_out * Mi;
    const Index cols = op.n_in + op.p_in * Mi;
    Matrix D = Matrix::Zero(rows, cols);

    // Exact for kernel degree plus basis degree M-1.
    const std::size_t gl = static_cast<std::size_t>((deg + static_cast<int>(M)) / 2 + 1);

    D.topLeftCorner(op.n_out, op.n_in) = op.P;
    if (op.p_in > 0 && op.n_out > 0) {
        integrate_against_basis(b, gl, -1.0, 0.0, [&](double t) { return op.Q1(t); },
                                D.block(0, op.n_in, op.n_out, op.p_in * Mi), op.p_in, M);
    }
    for (std::size_t j = 0; j < M; ++j) {
        const double s = b.nodes[j];
        const Matrix q2 = op.Q2(s);
        const Matrix r0 = op.R0(s);
        Matrix row = Matrix::Zero(op.p_out, op.p_in * Mi);
        integrate_against_basis(b, gl, -1.0, s, [&](double t) { return op.R1(s, t); }, row, op.p_in, M);
        integrate_against_basis(b, gl, s, 0.0, [&](double t) { return op.R2(s, t); }, row, op.p_in, M);
        for (Index a = 0; a < op.p_out; ++a) {
            const Index r = node_index(op.n_out, a, j, M);
            D.block(r, 0, 1, op.n_in) = q2.row(a);
            for (Index c = 0; c < op.p_in; ++c) {
                D(r, node_index(op.n_in, c, j, M)) += r0(a, c);
            }
            D.block(r, op.n_in, 1, op.p_in * Mi) += row.row(a);
        }
    }
    return D;
}

Vector sample(const HybridVector& v, std::size_t M) {
    const auto nodes = quad::cgl_nodes(M);
    Vector out(v.n() + v.p() * static_cast<Index>(M));
    out.head(v.n()) = v.x();
    for (std::size_t j = 0; j < M; ++j) {
        const Vector f = v.f(nodes[j]);
        for (Index c = 0; c < v.p(); ++c) out(node_index(v.n(), c, j, M)) = f(c);
    }
    return out;
}

}  // namespace delayrep
