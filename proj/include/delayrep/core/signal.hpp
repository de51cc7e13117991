#pragma once

/**
 * @file signal.hpp
 * @brief Exogenous input signals w(t), u(t) described by a small grammar.
 *
 * Each component is one scalar signal.  Inputs are taken to vanish for t < 0;
 * raw() exposes the formula without that cut, which is what channel histories
 * built from an input want.
 */

#include "delayrep/core/types.hpp"

#include <string>
#include <vector>

namespace delayrep {

class Signal {
public:
    enum class Kind { Zero, Step, Polynomial, Sinusoid, Sampled };

    static Signal zero();
    static Signal constant(double c);
    static Signal step(double t0, double level);
    static Signal polynomial(std::vector<double> coeffs);
    /// amp * sin(freq * t + phase); freq is angular (rad/s).
    static Signal sinusoid(double amp, double freq, double phase);
    static Signal sampled(std::vector<double> grid, std::vector<double> values);

    Kind kind() const { return kind_; }

    /// Value with the causal cut: 0 for t < 0.
    double value(double t) const { return t < 0.0 ? 0.0 : raw(t); }
    double raw(double t) const;
    /// d/dt of raw(); throws for signals without an analytic derivative.
    double derivative(double t) const;

    bool has_analytic_derivative() const { return kind_ != Kind::Sampled; }
    /// True when the signal is in W^{1,2} on bounded intervals (no jumps).
    bool differentiable() const;
    double initial_value() const { return raw(0.0); }
    Signal scaled(double alpha) const;

    /// Grammar form, e.g. "sin:1:2:0".
    std::string describe() const;

private:
    Kind kind_ = Kind::Zero;
    std::vector<double> params_;
    std::vector<double> grid_;
};

class SignalDescriptor {
public:
    SignalDescriptor() = default;
    explicit SignalDescriptor(std::vector<Signal> components) : components_(std::move(components)) {}

    static SignalDescriptor zeros(Index dim);
    /// Parses `zero`, `const:c`, `step:t0:c`, `sin:a:f:ph`, `poly:c0,c1,...`.
    /// Components are separated by ';'.  A single component is broadcast to `dim`.
    static SignalDescriptor parse(const std::string& text, Index dim);

    Index dim() const { return static_cast<Index>(components_.size()); }
    const std::vector<Signal>& components() const { return components_; }

    Vector value(double t) const;
    Vector raw(double t) const;
    Vector derivative(double t) const;

    bool has_analytic_derivative() const;
    bool differentiable() const;
    /// True when every component is exactly zero at t = 0.
    bool vanishes_at_zero(double tol = 0.0) const;
    bool is_zero() const;

    SignalDescriptor scaled(double alpha) const;
    std::string describe() const;

private:
    std::vector<Signal> components_;
};

}  // namespace delayrep
