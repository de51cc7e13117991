#pragma once

/**
 * @file pi_operator.hpp
 * @brief Four-block partial-integral operators on R^n x L2[-1,0]^p and their algebra.
 *
 * Action on (x, f):
 *   finite   = P x + int_{-1}^0 Q1(s) f(s) ds
 *   function = Q2(s) x + R0(s) f(s) + int_{-1}^s R1(s,t) f(t) dt + int_s^0 R2(s,t) f(t) dt
 */

#include "delayrep/core/poly_kernel.hpp"
#include "delayrep/core/types.hpp"

#include <functional>

namespace delayrep {

struct PIOperator {
    Index n_out = 0;
    Index n_in = 0;
    Index p_out = 0;
    Index p_in = 0;
    Matrix P;       ///< n_out x n_in
    PolyKernel Q1;  ///< n_out x p_in, in s
    PolyKernel Q2;  ///< p_out x n_in, in s
    PolyKernel R0;  ///< p_out x p_in, in s
    PolyKernel R1;  ///< p_out x p_in, in (s, theta)
    PolyKernel R2;  ///< p_out x p_in, in (s, theta)

    static PIOperator zero(Index n_out, Index n_in, Index p_out, Index p_in);
    /// P = I_n, R0 = I_p.
    static PIOperator identity(Index n, Index p);

    /// Throws DimensionError when a block disagrees with the declared sizes.
    void check() const;
    /// Largest kernel degree over all blocks.
    int degree() const;
};

class HybridVector {
public:
    HybridVector() = default;
    /// f is a p x 1 univariate kernel on [-1, 0].
    static HybridVector polynomial(Vector x, PolyKernel f);
    static HybridVector function(Vector x, Index p, std::function<Vector(double)> f);

    Index n() const { return x_.size(); }
    Index p() const { return p_; }
    const Vector& x() const { return x_; }
    bool is_polynomial() const { return !func_; }
    const PolyKernel& poly() const { return poly_; }
    Vector f(double s) const;

private:
    Vector x_;
    Index p_ = 0;
    PolyKernel poly_;
    std::function<Vector(double)> func_;
};

/// Exact when v is polynomial; otherwise the result's function part integrates lazily by quadrature.
HybridVector apply(const PIOperator& op, const HybridVector& v);

PIOperator add(const PIOperator& a, const PIOperator& b);
PIOperator scale(const PIOperator& a, double alpha);
/// The operator of v -> a(b(v)).  Throws DegreeOverflow when a kernel exceeds max_degree.
PIOperator compose(const PIOperator& a, const PIOperator& b, int max_degree = kDefaultMaxDegree);

}  // namespace delayrep
