#include "delayrep/core/history.hpp"

#include "delayrep/core/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace delayrep {

HistoryFunction::HistoryFunction(std::vector<double> grid, Matrix values, int channel)
    : grid_(std::move(grid)), values_(std::move(values)), channel_(channel) {
    if (grid_.size() < 2) throw ValidationError("history grid needs at least two points");
    if (static_cast<Index>(grid_.size()) != values_.cols()) {
        throw DimensionError("history: " + std::to_string(grid_.size()) + " grid points but " +
                             std::to_string(values_.cols()) + " value columns");
    }
    for (std::size_t k = 1; k < grid_.size(); ++k) {
        if (!(grid_[k] > grid_[k - 1])) throw ValidationError("history grid must be strictly increasing");
    }
    if (std::abs(grid_.back()) > 1e-12 * std::max(1.0, std::abs(grid_.front()))) {
        throw ValidationError("history grid must end at 0");
    }
    grid_.back() = 0.0;
    if (!values_.allFinite()) throw ValidationError("history values must be finite");
}

HistoryFunction HistoryFunction::zero(Index dim, double lower, int channel) {
    return HistoryFunction({lower, 0.0}, Matrix::Zero(dim, 2), channel);
}

HistoryFunction HistoryFunction::constant(const Vector& value, double lower, int channel) {
    Matrix v(value.size(), 2);
    v.col(0) = value;
    v.col(1) = value;
    return HistoryFunction({lower, 0.0}, v, channel);
}

HistoryFunction HistoryFunction::sample(const std::function<Vector(double)>& f, Index dim, double lower,
                                        std::size_t points, int channel) {
    if (points < 2) throw ValidationError("history sampling needs at least two points");
    std::vector<double> grid(points);
    Matrix values(dim, static_cast<Index>(points));
    for (std::size_t k = 0; k < points; ++k) {
        grid[k] = lower * (1.0 - static_cast<double>(k) / static_cast<double>(points - 1));
        const Vector v = f(grid[k]);
        require_shape(v, dim, 1, "history sample");
        values.col(static_cast<Index>(k)) = v;
    }
    return HistoryFunction(std::move(grid), std::move(values), channel);
}

std::size_t HistoryFunction::stencil_start(double s) const {
    const double eps = 1e-12 * std::max(1.0, std::abs(grid_.front()));
    if (s < grid_.front() - eps || s > eps) {
        throw DomainError("history of channel " + std::to_string(channel_) + " evaluated at " + std::to_string(s) +
                          " outside [" + std::to_string(grid_.front()) + ", 0]");
    }
    if (grid_.size() <= 4) return 0;
    const auto hi = std::upper_bound(grid_.begin(), grid_.end(), s);
    const auto seg = std::max<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(hi - grid_.begin()) - 1, 0);
    const auto last = static_cast<std::ptrdiff_t>(grid_.size()) - 4;
    return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(seg - 1, 0, last));
}

Vector HistoryFunction::operator()(double s) const {
    const std::size_t first = stencil_start(s);
    const std::size_t count = std::min<std::size_t>(4, grid_.size());
    Vector acc = Vector::Zero(dim());
    for (std::size_t k = first; k < first + count; ++k) {
        double l = 1.0;
        for (std::size_t j = first; j < first + count; ++j) {
            if (j != k) l *= (s - grid_[j]) / (grid_[k] - grid_[j]);
        }
        acc += l * values_.col(static_cast<Index>(k));
    }
    return acc;
}

Vector HistoryFunction::derivative(double s) const {
    const std::size_t first = stencil_start(s);
    const std::size_t count = std::min<std::size_t>(4, grid_.size());
    Vector acc = Vector::Zero(dim());
    for (std::size_t k = first; k < first + count; ++k) {
        double dl = 0.0;
        for (std::size_t i = first; i < first + count; ++i) {
            if (i == k) continue;
            double term = 1.0 / (grid_[k] - grid_[i]);
            for (std::size_t j = first; j < first + count; ++j) {
                if (j != k && j != i) term *= (s - grid_[j]) / (grid_[k] - grid_[j]);
            }
            dl += term;
        }
        acc += dl * values_.col(static_cast<Index>(k));
    }
    return acc;
}

Vector HistoryFunction::integrate(const PolyKernel& k) const {
    require_shape(Matrix::Zero(k.cols(), 1), dim(), 1, "history integrand");
    const std::size_t nodes = quad::nodes_for_kernel_times_cubic(k.degree());
    Vector acc = Vector::Zero(k.rows());
    for (std::size_t seg = 0; seg + 1 < grid_.size(); ++seg) {
        const auto rule = quad::gauss_legendre(nodes, grid_[seg], grid_[seg + 1]);
        for (std::size_t q = 0; q < nodes; ++q) {
            const double s = rule.nodes[q];
            acc += rule.weights[q] * (k(s) * (*this)(s));
        }
    }
    return acc;
}

Vector HistoryFunction::moment(int j) const {
    std::vector<Matrix> c(static_cast<std::size_t>(j + 1), Matrix::Zero(dim(), dim()));
    c.back() = Matrix::Identity(dim(), dim());
    return integrate(PolyKernel::univariate(std::move(c), lower()));
}

HistoryFunction HistoryFunction::restricted(double lower) const {
    const double eps = 1e-12 * std::max(1.0, std::abs(lower));
    if (lower < grid_.front() - eps) throw DomainError("history restriction below its interval");
    if (std::abs(lower - grid_.front()) <= eps) return *this;
    std::vector<double> g{lower};
    std::vector<Vector> cols{(*this)(lower)};
    for (std::size_t k = 0; k < grid_.size(); ++k) {
        if (grid_[k] > lower + eps) {
            g.push_back(grid_[k]);
            cols.push_back(values_.col(static_cast<Index>(k)));
        }
    }
    Matrix v(dim(), static_cast<Index>(g.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) v.col(static_cast<Index>(k)) = cols[k];
    return HistoryFunction(std::move(g), std::move(v), channel_);
}

HistoryFunction HistoryFunction::padded_with_zeros(Index rows) const {
    Matrix v = Matrix::Zero(dim() + rows, values_.cols());
    v.topRows(dim()) = values_;
    return HistoryFunction(grid_, std::move(v), channel_);
}

HistoryFunction HistoryFunction::compressed(double tau) const {
    std::vector<double> g = grid_;
    for (auto& s : g) s /= tau;
    return HistoryFunction(std::move(g), values_, channel_);
}

HistoryFunction HistoryFunction::stretched(double tau) const {
    std::vector<double> g = grid_;
    for (auto& s : g) s *= tau;
    return HistoryFunction(std::move(g), values_, channel_);
}

}  // namespace delayrep
