#pragma once

/**
 * @file poly_kernel.hpp
 * @brief Matrix-valued polynomial kernels in one variable (s) or two (s, theta).
 *
 * A kernel lives on a declared interval [lower, 0]; the delay kernels of a DDE
 * use lower = -tau_i, the kernels of PI operators use lower = -1.  Univariate
 * coefficients are indexed by the power of s; bivariate coefficients are stored
 * densely as coeffs[i * (degree + 1) + j] for the monomial s^i theta^j.
 */

#include "delayrep/core/types.hpp"

#include <vector>

namespace delayrep {

inline constexpr int kDefaultMaxDegree = 8;

class PolyKernel {
public:
    PolyKernel() = default;

    static PolyKernel zero(Index rows, Index cols, int vars = 1, double lower = -1.0);
    static PolyKernel constant(const Matrix& value, int vars = 1, double lower = -1.0);
    /// coeffs[k] multiplies s^k.
    static PolyKernel univariate(std::vector<Matrix> coeffs, double lower = -1.0);
    /// coeffs.size() must equal (degree + 1)^2.
    static PolyKernel bivariate(int degree, std::vector<Matrix> coeffs, double lower = -1.0);

    Index rows() const { return rows_; }
    Index cols() const { return cols_; }
    int vars() const { return vars_; }
    int degree() const { return degree_; }
    double lower() const { return lower_; }
    const std::vector<Matrix>& coeffs() const { return coeffs_; }

    const Matrix& coeff(int i) const;
    const Matrix& coeff(int i, int j) const;
    Matrix& coeff(int i);
    Matrix& coeff(int i, int j);

    /// Horner evaluation; throws DomainError outside [lower, 0].
    Matrix operator()(double s) const;
    Matrix operator()(double s, double theta) const;

    bool is_zero(double tol = 0.0) const;
    /// Highest power carrying a nonzero coefficient (0 for the zero kernel).
    int effective_degree() const;
    /// Drops trailing exactly-zero degrees.
    PolyKernel trimmed() const;
    PolyKernel padded(int degree) const;
    PolyKernel with_lower(double lower) const;

    /// k(tau * s) on [lower / tau, 0].
    PolyKernel rescaled(double tau) const;
    /// Univariate only: the polynomial s -> integral_a^s k(eta) d eta.
    PolyKernel antiderivative_from(double a) const;
    /// Univariate only: d/ds.
    PolyKernel derivative() const;
    /// Univariate only: closed-form definite integral.
    Matrix integral(double a, double b) const;

    /// Univariate kernel promoted to two variables, depending on s only or on theta only.
    PolyKernel lift_in_s() const;
    PolyKernel lift_in_theta() const;

    PolyKernel& operator+=(const PolyKernel& other);
    PolyKernel& operator*=(double alpha);

    friend PolyKernel operator+(PolyKernel a, const PolyKernel& b) { return a += b; }
    friend PolyKernel operator-(PolyKernel a, const PolyKernel& b);
    friend PolyKernel operator*(double alpha, PolyKernel a) { return a *= alpha; }
    friend PolyKernel operator*(const Matrix& left, const PolyKernel& k);
    friend PolyKernel operator*(const PolyKernel& k, const Matrix& right);

    /// Univariate matrix product of polynomials.
    static PolyKernel product(const PolyKernel& a, const PolyKernel& b);

    static PolyKernel vstack(const std::vector<PolyKernel>& parts);
    static PolyKernel hstack(const std::vector<PolyKernel>& parts);
    static PolyKernel block_diag(const std::vector<PolyKernel>& parts);

private:
    void check_domain(double s) const;
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i * (degree_ + 1) + j); }

    Index rows_ = 0;
    Index cols_ = 0;
    int vars_ = 1;
    int degree_ = 0;
    double lower_ = -1.0;
    std::vector<Matrix> coeffs_{Matrix(0, 0)};
};

Matrix eval_kernel(const PolyKernel& k, double s);
Matrix eval_kernel(const PolyKernel& k, double s, double theta);

}  // namespace delayrep
