#include "delayrep/core/poly_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace delayrep {

namespace {

std::size_t coeff_count(int vars, int degree) {
    const auto d1 = static_cast<std::size_t>(degree + 1);
    return vars == 1 ? d1 : d1 * d1;
}

bool same_lower(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

}  // namespace

PolyKernel PolyKernel::zero(Index rows, Index cols, int vars, double lower) {
    if (vars != 1 && vars != 2) throw DimensionError("PolyKernel: vars must be 1 or 2");
    PolyKernel k;
    k.rows_ = rows;
    k.cols_ = cols;
    k.vars_ = vars;
    k.degree_ = 0;
    k.lower_ = lower;
    k.coeffs_.assign(1, Matrix::Zero(rows, cols));
    return k;
}

PolyKernel PolyKernel::constant(const Matrix& value, int vars, double lower) {
    PolyKernel k = zero(value.rows(), value.cols(), vars, lower);
    k.coeffs_[0] = value;
    return k;
}

PolyKernel PolyKernel::univariate(std::vector<Matrix> coeffs, double lower) {
    if (coeffs.empty()) throw DimensionError("PolyKernel: empty coefficient list");
    PolyKernel k;
    k.rows_ = coeffs.front().rows();
    k.cols_ = coeffs.front().cols();
    for (const auto& c : coeffs) require_shape(c, k.rows_, k.cols_, "PolyKernel coefficient");
    k.vars_ = 1;
    k.degree_ = static_cast<int>(coeffs.size()) - 1;
    k.lower_ = lower;
    k.coeffs_ = std::move(coeffs);
    return k;
}

PolyKernel PolyKernel::bivariate(int degree, std::vector<Matrix> coeffs, double lower) {
    if (degree < 0 || coeffs.size() != coeff_count(2, degree)) {
        throw DimensionError("PolyKernel: bivariate kernel of degree " + std::to_string(degree) + " needs " +
                             std::to_string(coeff_count(2, degree)) + " coefficients, got " +
                             std::to_string(coeffs.size()));
    }
    PolyKernel k;
    k.rows_ = coeffs.front().rows();
    k.cols_ = coeffs.front().cols();
    for (const auto& c : coeffs) require_shape(c, k.rows_, k.cols_, "PolyKernel coefficient");
    k.vars_ = 2;
    k.degree_ = degree;
    k.lower_ = lower;
    k.coeffs_ = std::move(coeffs);
    return k;
}

const Matrix& PolyKernel::coeff(int i) const {
    if (vars_ != 1) throw DimensionError("PolyKernel::coeff(i) on a bivariate kernel");
    return coeffs_.at(static_cast<std::size_t>(i));
}

Matrix& PolyKernel::coeff(int i) {
    if (vars_ != 1) throw DimensionError("PolyKernel::coeff(i) on a bivariate kernel");
    return coeffs_.at(static_cast<std::size_t>(i));
}

const Matrix& PolyKernel::coeff(int i, int j) const {
    if (vars_ != 2) throw DimensionError("PolyKernel::coeff(i, j) on a univariate kernel");
    return coeffs_.at(index(i, j));
}

Matrix& PolyKernel::coeff(int i, int j) {
    if (vars_ != 2) throw DimensionError("PolyKernel::coeff(i, j) on a univariate kernel");
    return coeffs_.at(index(i, j));
}

void PolyKernel::check_domain(double s) const {
    const double eps = 1e-12 * std::max(1.0, std::abs(lower_));
    if (!(s >= lower_ - eps && s <= eps)) {
        throw DomainError("kernel evaluated at " + std::to_string(s) + " outside [" + std::to_string(lower_) +
                          ", 0]");
    }
}

Matrix PolyKernel::operator()(double s) const {
    if (vars_ != 1) throw DimensionError("univariate evaluation of a bivariate kernel");
    check_domain(s);
    Matrix acc = coeffs_[static_cast<std::size_t>(degree_)];
    for (int k = degree_ - 1; k >= 0; --k) acc = acc * s + coeffs_[static_cast<std::size_t>(k)];
    return acc;
}

Matrix PolyKernel::operator()(double s, double theta) const {
    if (vars_ != 2) throw DimensionError("bivariate evaluation of a univariate kernel");
    check_domain(s);
    check_domain(theta);
    Matrix outer = Matrix::Zero(rows_, cols_);
    for (int i = degree_; i >= 0; --i) {
        Matrix inner = coeffs_[index(i, degree_)];
        for (int j = degree_ - 1; j >= 0; --j) inner = inner * theta + coeffs_[index(i, j)];
        outer = outer * s + inner;
    }
    return outer;
}

bool PolyKernel::is_zero(double tol) const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [tol](const Matrix& c) {
        return c.size() == 0 || c.cwiseAbs().maxCoeff() <= tol;
    });
}

int PolyKernel::effective_degree() const {
    int best = 0;
    for (int i = 0; i <= degree_; ++i) {
        if (vars_ == 1) {
            if (!coeffs_[static_cast<std::size_t>(i)].isZero(0.0)) best = i;
        } else {
            for (int j = 0; j <= degree_; ++j) {
                if (!coeffs_[index(i, j)].isZero(0.0)) best = std::max(best, std::max(i, j));
            }
        }
    }
    return best;
}

PolyKernel PolyKernel::trimmed() const { return padded(effective_degree()); }

PolyKernel PolyKernel::padded(int degree) const {
    if (degree == degree_) return *this;
    PolyKernel k;
    k.rows_ = rows_;
    k.cols_ = cols_;
    k.vars_ = vars_;
    k.degree_ = degree;
    k.lower_ = lower_;
    k.coeffs_.assign(coeff_count(vars_, degree), Matrix::Zero(rows_, cols_));
    const int keep = std::min(degree, degree_);
    for (int i = 0; i <= keep; ++i) {
        if (vars_ == 1) {
            k.coeffs_[static_cast<std::size_t>(i)] = coeffs_[static_cast<std::size_t>(i)];
        } else {
            for (int j = 0; j <= keep; ++j) k.coeffs_[k.index(i, j)] = coeffs_[index(i, j)];
        }
    }
    return k;
}

PolyKernel PolyKernel::with_lower(double lower) const {
    PolyKernel k = *this;
    k.lower_ = lower;
    return k;
}

PolyKernel PolyKernel::rescaled(double tau) const {
    PolyKernel k = *this;
    k.lower_ = lower_ / tau;
    for (int i = 0; i <= degree_; ++i) {
        if (vars_ == 1) {
            k.coeffs_[static_cast<std::size_t>(i)] *= std::pow(tau, i);
        } else {
            for (int j = 0; j <= degree_; ++j) k.coeffs_[index(i, j)] *= std::pow(tau, i + j);
        }
    }
    return k;
}

PolyKernel PolyKernel::antiderivative_from(double a) const {
    if (vars_ != 1) throw DimensionError("antiderivative of a bivariate kernel");
    std::vector<Matrix> c(static_cast<std::size_t>(degree_ + 2), Matrix::Zero(rows_, cols_));
    for (int k = 0; k <= degree_; ++k) {
        c[static_cast<std::size_t>(k + 1)] = coeffs_[static_cast<std::size_t>(k)] / static_cast<double>(k + 1);
    }
    PolyKernel out = univariate(std::move(c), lower_);
    // subtract the value at a so the antiderivative vanishes there
    Matrix at_a = out.coeffs_[static_cast<std::size_t>(out.degree_)];
    for (int k = out.degree_ - 1; k >= 0; --k) at_a = at_a * a + out.coeffs_[static_cast<std::size_t>(k)];
    out.coeffs_[0] -= at_a;
    return out;
}

PolyKernel PolyKernel::derivative() const {
    if (vars_ != 1) throw DimensionError("derivative of a bivariate kernel");
    if (degree_ == 0) return zero(rows_, cols_, 1, lower_);
    std::vector<Matrix> c(static_cast<std::size_t>(degree_));
    for (int k = 1; k <= degree_; ++k) c[static_cast<std::size_t>(k - 1)] = coeffs_[static_cast<std::size_t>(k)] * k;
    return univariate(std::move(c), lower_);
}

Matrix PolyKernel::integral(double a, double b) const {
    if (vars_ != 1) throw DimensionError("definite integral of a bivariate kernel");
    Matrix acc = Matrix::Zero(rows_, cols_);
    for (int k = 0; k <= degree_; ++k) {
        const double w = (std::pow(b, k + 1) - std::pow(a, k + 1)) / static_cast<double>(k + 1);
        acc += w * coeffs_[static_cast<std::size_t>(k)];
    }
    return acc;
}

PolyKernel PolyKernel::lift_in_s() const {
    if (vars_ != 1) throw DimensionError("lift of a bivariate kernel");
    PolyKernel k = zero(rows_, cols_, 2, lower_).padded(degree_);
    for (int i = 0; i <= degree_; ++i) k.coeff(i, 0) = coeffs_[static_cast<std::size_t>(i)];
    return k;
}

PolyKernel PolyKernel::lift_in_theta() const {
    if (vars_ != 1) throw DimensionError("lift of a bivariate kernel");
    PolyKernel k = zero(rows_, cols_, 2, lower_).padded(degree_);
    for (int j = 0; j <= degree_; ++j) k.coeff(0, j) = coeffs_[static_cast<std::size_t>(j)];
    return k;
}

PolyKernel& PolyKernel::operator+=(const PolyKernel& other) {
    if (other.vars_ != vars_ || other.rows_ != rows_ || other.cols_ != cols_) {
        throw DimensionError("PolyKernel addition: shape mismatch (" + std::to_string(rows_) + "x" +
                             std::to_string(cols_) + " vs " + std::to_string(other.rows_) + "x" +
                             std::to_string(other.cols_) + ")");
    }
    if (!same_lower(lower_, other.lower_) && !other.is_zero() && !is_zero()) {
        throw DomainError("PolyKernel addition: kernels live on different intervals");
    }
    if (is_zero() && !other.is_zero()) lower_ = other.lower_;
    const int d = std::max(degree_, other.degree_);
    *this = padded(d);
    const PolyKernel rhs = other.padded(d);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
    return *this;
}

PolyKernel& PolyKernel::operator*=(double alpha) {
    for (auto& c : coeffs_) c *= alpha;
    return *this;
}

PolyKernel operator-(PolyKernel a, const PolyKernel& b) { return a += (-1.0) * b; }

PolyKernel operator*(const Matrix& left, const PolyKernel& k) {
    if (left.cols() != k.rows_) throw DimensionError("matrix * kernel: " + shape_str(left) + " times " +
                                                     std::to_string(k.rows_) + "x" + std::to_string(k.cols_));
    PolyKernel out = k;
    out.rows_ = left.rows();
    for (auto& c : out.coeffs_) c = left * c;
    return out;
}

PolyKernel operator*(const PolyKernel& k, const Matrix& right) {
    if (right.rows() != k.cols_) throw DimensionError("kernel * matrix: " + std::to_string(k.rows_) + "x" +
                                                      std::to_string(k.cols_) + " times " + shape_str(right));
    PolyKernel out = k;
    out.cols_ = right.cols();
    for (auto& c : out.coeffs_) c = c * right;
    return out;
}

PolyKernel PolyKernel::product(const PolyKernel& a, const PolyKernel& b) {
    if (a.vars_ != 1 || b.vars_ != 1) throw DimensionError("PolyKernel::product expects univariate kernels");
    if (a.cols_ != b.rows_) throw DimensionError("PolyKernel::product: inner dimension mismatch");
    std::vector<Matrix> c(static_cast<std::size_t>(a.degree_ + b.degree_ + 1), Matrix::Zero(a.rows_, b.cols_));
    for (int i = 0; i <= a.degree_; ++i) {
        for (int j = 0; j <= b.degree_; ++j) {
            c[static_cast<std::size_t>(i + j)] += a.coeffs_[static_cast<std::size_t>(i)] * b.coeffs_[static_cast<std::size_t>(j)];
        }
    }
    return univariate(std::move(c), a.lower_);
}

namespace {

template <typename Place>
PolyKernel assemble(const std::vector<PolyKernel>& parts, Index rows, Index cols, Place place) {
    int vars = parts.front().vars();
    int degree = 0;
    for (const auto& p : parts) {
        if (p.vars() != vars) throw DimensionError("kernel stacking: mixed variable counts");
        degree = std::max(degree, p.degree());
    }
    PolyKernel out = PolyKernel::zero(rows, cols, vars, parts.front().lower()).padded(degree);
    Index r = 0;
    Index c = 0;
    for (const auto& p0 : parts) {
        const PolyKernel p = p0.padded(degree);
        for (int i = 0; i <= degree; ++i) {
            if (vars == 1) {
                out.coeff(i).block(r, c, p.rows(), p.cols()) = p.coeff(i);
            } else {
                for (int j = 0; j <= degree; ++j) out.coeff(i, j).block(r, c, p.rows(), p.cols()) = p.coeff(i, j);
            }
        }
        place(p, r, c);
    }
    return out;
}

}  // namespace

PolyKernel PolyKernel::vstack(const std::vector<PolyKernel>& parts) {
    if (parts.empty()) return {};
    Index rows = 0;
    for (const auto& p : parts) {
        if (p.cols() != parts.front().cols()) throw DimensionError("kernel vstack: column mismatch");
        rows += p.rows();
    }
    return assemble(parts, rows, parts.front().cols(), [](const PolyKernel& p, Index& r, Index&) { r += p.rows(); });
}

PolyKernel PolyKernel::hstack(const std::vector<PolyKernel>& parts) {
    if (parts.empty()) return {};
    Index cols = 0;
    for (const auto& p : parts) {
        if (p.rows() != parts.front().rows()) throw DimensionError("kernel hstack: row mismatch");
        cols += p.cols();
    }
    return assemble(parts, parts.front().rows(), cols, [](const PolyKernel& p, Index&, Index& c) { c += p.cols(); });
}

PolyKernel PolyKernel::block_diag(const std::vector<PolyKernel>& parts) {
    if (parts.empty()) return {};
    Index rows = 0;
    Index cols = 0;
    for (const auto& p : parts) {
        rows += p.rows();
        cols += p.cols();
    }
    return assemble(parts, rows, cols, [](const PolyKernel& p, Index& r, Index& c) {
        r += p.rows();
        c += p.cols();
    });
}

Matrix eval_kernel(const PolyKernel& k, double s) { return k(s); }

Matrix eval_kernel(const PolyKernel& k, double s, double theta) { return k(s, theta); }

}  // namespace delayrep
