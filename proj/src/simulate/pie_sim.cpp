#include "delayrep/simulate/simulate.hpp"

#include "delayrep/core/validate.hpp"
#include "delayrep/core/quadrature.hpp"
#include "delayrep/piops/discretize.hpp"
#include "delayrep/util/log.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace delayrep {

namespace {

constexpr double kRcondFloor = 1e-12;

/// 4th-order finite difference of a causal signal on the simulation grid; one-sided near
/// t = 0 so the stencil never reads the cut at t < 0.
Vector fd_derivative(const SignalDescriptor& s, double t, double h) {
    if (t < 2.0 * h) {
        return (-25.0 * s.value(t) + 48.0 * s.value(t + h) - 36.0 * s.value(t + 2 * h) + 16.0 * s.value(t + 3 * h) -
                3.0 * s.value(t + 4 * h)) /
               (12.0 * h);
    }
    return (s.value(t - 2 * h) - 8.0 * s.value(t - h) + 8.0 * s.value(t + h) - s.value(t + 2 * h)) / (12.0 * h);
}

Vector input_rate(const SignalDescriptor& s, double t, double h, InputDerivative mode) {
    if (mode == InputDerivative::Analytic && s.has_analytic_derivative()) return s.derivative(t);
    return fd_derivative(s, t, h);
}

}  // namespace

HybridVector pie_initial_state(const PIESpec& pie, const Vector& x0, const std::vector<HistoryFunction>& r0) {
    const Dims& d = pie.dims;
    require_shape(x0, d.n, 1, "x0");
    if (r0.size() != pie.delays.size()) throw DimensionError("one channel history per delay required");
    for (std::size_t i = 0; i < r0.size(); ++i) {
        if (r0[i].dim() != d.p_i[i]) throw DimensionError("channel history " + std::to_string(i) + " has the wrong dim");
    }
    const std::vector<double> delays = pie.delays;
    const std::vector<HistoryFunction> hist = r0;
    const Index np = d.total_channel_dim();
    return HybridVector::function(x0, np, [delays, hist, np](double s) {
        Vector f(np);
        Index off = 0;
        for (std::size_t i = 0; i < hist.size(); ++i) {
            const double tau = delays[i];
            f.segment(off, hist[i].dim()) = tau * hist[i].derivative(tau * s);
            off += hist[i].dim();
        }
        return f;
    });
}

Trajectory simulate_pie(const PIESpec& pie, const HybridVector& x0, const SignalDescriptor& w,
                        const SignalDescriptor& u, const SimConfig& cfg) {
    throw_if_invalid(validate(pie), "simulate_pie");
    if (cfg.integrator == Integrator::RK4Characteristics) {
        throw ValidationError("PIEs are integrated by the implicit trapezoid rule only");
    }
    const Dims& d = pie.dims;
    const Index n = d.n, m = d.m, p = d.p, q = d.q, r = d.r;
    const Index np = pie.function_dim();
    if (w.dim() != m || u.dim() != p) throw DimensionError("input descriptors do not match (m, p)");
    if (x0.n() != n || x0.p() != np) throw DimensionError("PIE initial state does not match (n, sum p_i)");
    double min_tau = std::numeric_limits<double>::infinity();
    for (double tau : pie.delays) min_tau = std::min(min_tau, tau);
    cfg.check(min_tau);

    InputRequirements req;
    req.w_smooth = !pie.BT1.Q2.is_zero();
    req.u_smooth = !pie.BT2.Q2.is_zero();
    throw_if_invalid(validate_inputs(req, m, p, w, u), "simulate_pie inputs");

    const std::size_t M = cfg.order;
    const Matrix T = discretize(pie.T, M);
    const Matrix A = discretize(pie.A, M);
    const Matrix B = hstack({discretize(pie.B1, M), discretize(pie.B2, M)});
    const Matrix BT = hstack({discretize(pie.BT1, M), discretize(pie.BT2, M)});
    const Matrix C2 = discretize(pie.C2, M);
    const Matrix C1 = discretize(pie.C1, M);

    const double h = cfg.dt;
    const Matrix lhs = T - 0.5 * h * A;
    const Matrix rhs_op = T + 0.5 * h * A;
    const Eigen::PartialPivLU<Matrix> lu(lhs);
    const double rc = lhs.size() > 0 ? lu.rcond() : 1.0;
    if (!(rc > kRcondFloor)) {
        std::ostringstream msg;
        msg << "PIE discretization singular: cond(T - dt/2 A) > 1e12 at M = " << M << ", dt = " << h;
        throw NumericalError(msg.str());
    }

    const std::size_t steps = cfg.steps();
    Trajectory tr;
    tr.representation = "pie";
    tr.dt = h;
    tr.t.resize(steps + 1);
    const auto cols = static_cast<Index>(steps + 1);
    tr.x = Matrix::Zero(n, cols);
    tr.xdot = Matrix::Zero(0, cols);
    tr.v = Matrix::Zero(0, cols);
    tr.y = Matrix::Zero(r, cols);
    tr.z = Matrix::Zero(q, cols);
    tr.w = Matrix::Zero(m, cols);
    tr.u = Matrix::Zero(p, cols);
    tr.nodes = quad::cgl_nodes(M);
    for (Index pi : d.p_i) tr.channels.push_back(Matrix::Zero(pi * static_cast<Index>(M), cols));

    auto inputs_at = [&](double t) {
        Vector in(m + p);
        in << w.value(t), u.value(t);
        return in;
    };
    auto rates_at = [&](double t) {
        Vector in(m + p);
        in << input_rate(w, t, h, cfg.input_derivative), input_rate(u, t, h, cfg.input_derivative);
        return in;
    };
    auto record = [&](std::size_t k, const Vector& X, const Vector& in) {
        const auto c = static_cast<Index>(k);
        tr.t[k] = static_cast<double>(k) * h;
        const Vector full = T * X + BT * in;
        tr.x.col(c) = full.head(n);
        Index off = n;
        for (auto& ch : tr.channels) {
            ch.col(c) = full.segment(off, ch.rows());
            off += ch.rows();
        }
        tr.z.col(c) = C1 * X + pie.D11.P * in.head(m) + pie.D12.P * in.tail(p);
        tr.y.col(c) = C2 * X + pie.D21.P * in.head(m) + pie.D22.P * in.tail(p);
        tr.w.col(c) = in.head(m);
        tr.u.col(c) = in.tail(p);
    };

    Vector X = sample(x0, M);
    Vector in = inputs_at(0.0);
    Vector rate = rates_at(0.0);
    record(0, X, in);
    for (std::size_t k = 0; k < steps; ++k) {
        const double tn = static_cast<double>(k + 1) * h;
        const Vector in_n = inputs_at(tn);
        const Vector rate_n = rates_at(tn);
        const Vector b = rhs_op * X + 0.5 * h * (B * (in + in_n)) - 0.5 * h * (BT * (rate + rate_n));
        X = lu.solve(b);
        if (!X.allFinite()) throw NumericalError("PIE simulation diverged at t = " + std::to_string(tn));
        in = in_n;
        rate = rate_n;
        record(k + 1, X, in);
    }
    logging::debug("simulated pie at M = " + std::to_string(M) + " with " + std::to_string(steps) + " steps");
    return tr;
}

}  // namespace delayrep
