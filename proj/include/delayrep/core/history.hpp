#pragma once

/**
 * @file history.hpp
 * @brief Vector-valued initial functions on [lower, 0], stored on a grid and read back by
 * local cubic interpolation.
 */

#include "delayrep/core/poly_kernel.hpp"
#include "delayrep/core/types.hpp"

#include <functional>
#include <vector>

namespace delayrep {

class HistoryFunction {
public:
    HistoryFunction() = default;
    /// values has one column per grid point.
    HistoryFunction(std::vector<double> grid, Matrix values, int channel = 0);

    static HistoryFunction zero(Index dim, double lower, int channel = 0);
    static HistoryFunction constant(const Vector& value, double lower, int channel = 0);
    /// Samples f on `points` equispaced nodes of [lower, 0].
    static HistoryFunction sample(const std::function<Vector(double)>& f, Index dim, double lower,
                                  std::size_t points = 65, int channel = 0);

    int channel() const { return channel_; }
    Index dim() const { return values_.rows(); }
    double lower() const { return grid_.front(); }
    const std::vector<double>& grid() const { return grid_; }
    const Matrix& values() const { return values_; }

    /// Local 4-point Lagrange interpolation; exact for cubic data.
    Vector operator()(double s) const;
    Vector derivative(double s) const;

    /// integral over [lower, 0] of k(s) h(s) ds, Gauss-Legendre per grid segment.
    /// Exact when the history is cubic on each segment and k is polynomial.
    Vector integrate(const PolyKernel& k) const;
    /// integral over [lower, 0] of s^j h(s) ds.
    Vector moment(int j) const;

    /// The same function on the shorter interval [lower, 0].
    HistoryFunction restricted(double lower) const;
    /// Appends `rows` identically zero components.
    HistoryFunction padded_with_zeros(Index rows) const;

    /// s -> h(tau * s) on [lower / tau, 0].  Maps a DDF history on [-tau, 0] to [-1, 0].
    HistoryFunction compressed(double tau) const;
    /// s -> h(s / tau) on [tau * lower, 0].  Inverse of compressed().
    HistoryFunction stretched(double tau) const;

private:
    std::size_t stencil_start(double s) const;

    std::vector<double> grid_{-1.0, 0.0};
    Matrix values_ = Matrix::Zero(0, 2);
    int channel_ = 0;
};

}  // namespace delayrep
