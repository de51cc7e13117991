#pragma once

/**
 * @file trajectory.hpp
 * @brief Sampled solutions, simulation settings and trajectory comparison.
 */

#include "delayrep/core/types.hpp"

#include <string>
#include <vector>

namespace delayrep {

/// Signals sampled on the uniform grid t_k = k dt.  Every matrix holds one column per sample.
struct Trajectory {
    std::string representation;  ///< "dde", "nds", "ddf", "odepde" or "pie"
    double dt = 0.0;
    std::vector<double> t;
    Matrix x, xdot, y, z, v, w, u;
    /// DDF: r_i(t_k).  ODE-PDE and PIE: phi_i(t_k, s_j) stored component-major (c * M + j).
    std::vector<Matrix> channels;
    /// Transport nodes s_j on [-1, 0] when channels hold phi values.
    std::vector<double> nodes;

    Index samples() const { return static_cast<Index>(t.size()); }
    /// A named signal: x, xdot, y, z, v, w, u, or r<i> / phi<i> for a channel.
    const Matrix& signal(const std::string& name) const;
    /// Throws ValidationError when the grid is not uniform, lengths differ or values are not finite.
    void check() const;
};

/// Auto picks RK4 for the delay representations and the implicit trapezoid rule for PIEs;
/// asking for the other scheme is rejected.
enum class Integrator { Auto, RK4Characteristics, ImplicitTrapezoid };
enum class InputDerivative { Analytic, FiniteDifference };

struct SimConfig {
    double dt = 1e-3;
    double t_final = 1.0;
    std::size_t order = 16;  ///< PIE collocation order and number of reported transport nodes
    Integrator integrator = Integrator::Auto;
    InputDerivative input_derivative = InputDerivative::Analytic;

    /// Number of steps; the last sample sits at steps() * dt >= t_final - 1e-9 dt.
    std::size_t steps() const;
    /// Throws ValidationError unless dt > 0, t_final >= dt and dt <= min_delay / 4.
    void check(double min_delay) const;
};

struct SignalDeviation {
    std::string signal;
    double max_abs = 0.0;
    double max_rel = 0.0;  ///< max_abs over the peak magnitude of the reference
    double t_at_max = 0.0;
};

struct ComparisonReport {
    std::vector<SignalDeviation> deviations;

    double max_abs() const;
    const SignalDeviation& at(const std::string& signal) const;
};

/// Compares a against the reference b.  When the grids differ b is resampled by cubic
/// interpolation onto the part of a's grid it covers.  Throws DimensionError for signals of
/// different sizes and DomainError for disjoint time ranges.
ComparisonReport compare(const Trajectory& a, const Trajectory& b,
                         const std::vector<std::string>& signals = {"x", "y", "z"});

}  // namespace delayrep
