#include "delayrep/simulate/simulate.hpp"

#include "delayrep/convert/dde_ddf.hpp"
#include "delayrep/core/quadrature.hpp"
#include "delayrep/core/sewing.hpp"
#include "delayrep/core/validate.hpp"
#include "delayrep/util/log.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <string>

namespace delayrep {

namespace {

constexpr double kGridTol = 1e-9;
constexpr std::size_t kMaxBreakpoints = 20000;
constexpr std::size_t kPanels = 8;
constexpr std::size_t kPanelNodes = 8;

double min_delay(const std::vector<double>& delays) {
    return delays.empty() ? std::numeric_limits<double>::infinity()
                          : *std::min_element(delays.begin(), delays.end());
}

/// Flags grid indices reached by sums of delays.  Interpolation stencils stay inside the
/// smooth pieces between flagged indices, where the solution has its full regularity.
class Breakpoints {
public:
    Breakpoints(const std::vector<double>& delays, double dt, std::size_t steps)
        : prev_(steps + 1), next_(steps + 1) {
        std::vector<char> flag(steps + 1, 0);
        flag[0] = 1;
        flag[steps] = 1;
        const double tf = static_cast<double>(steps) * dt;
        std::map<long long, double> seen{{0, 0.0}};
        std::vector<double> queue{0.0};
        for (std::size_t head = 0; head < queue.size() && seen.size() < kMaxBreakpoints; ++head) {
            for (double tau : delays) {
                const double t = queue[head] + tau;
                if (t > tf * (1.0 + 1e-12)) continue;
                const auto key = std::llround(t / dt * 1e6);
                if (!seen.emplace(key, t).second) continue;
                queue.push_back(t);
                const double u = t / dt;
                const double k = std::round(u);
                if (std::abs(u - k) < 1e-6) flag[static_cast<std::size_t>(k)] = 1;
            }
        }
        std::size_t last = 0;
        for (std::size_t k = 0; k <= steps; ++k) {
            if (flag[k]) last = k;
            prev_[k] = last;
        }
        last = steps;
        for (std::size_t k = steps + 1; k-- > 0;) {
            if (flag[k]) last = k;
            next_[k] = last;
        }
    }

    std::size_t prev(std::size_t k) const { return prev_[k]; }
    std::size_t next(std::size_t k) const { return next_[k]; }

private:
    std::vector<std::size_t> prev_;
    std::vector<std::size_t> next_;
};

/// Side of a lookup landing exactly on a discontinuity at t = 0: the first RK stage sees the
/// right limit, the last stage the left limit.
enum Side : int { kLeft = -1, kInterior = 0, kRight = 1 };

bool before_start(double t, int side) { return t < -1e-12 || (t <= 1e-12 && side < 0); }

/// Samples on the grid with a fallback function for t < 0, read back by four-point Lagrange.
class ChannelSeries {
public:
    ChannelSeries(Index dim, std::size_t capacity, double dt, const Breakpoints* breaks,
                  std::function<Vector(double)> before)
        : data_(Matrix::Zero(dim, static_cast<Index>(capacity))), dt_(dt), breaks_(breaks),
          before_(std::move(before)) {}

    void push(const Vector& v) { data_.col(static_cast<Index>(count_++)) = v; }
    std::size_t count() const { return count_; }
    Matrix recorded() const { return data_.leftCols(static_cast<Index>(count_)); }

    Vector at(double t, int side) const {
        if (before_start(t, side)) return before_(std::min(t, 0.0));
        const double u = std::max(t, 0.0) / dt_;
        const double nearest = std::round(u);
        if (std::abs(u - nearest) < kGridTol) return sample(static_cast<std::size_t>(nearest));
        const auto j = static_cast<std::size_t>(std::floor(u));
        if (j + 1 >= count_) throw NumericalError("lookup past the recorded trajectory at t = " + std::to_string(t));
        const std::size_t width = std::min<std::size_t>(4, count_);
        const std::size_t last = count_ - 1;
        const std::size_t a = breaks_->prev(j);
        const std::size_t b = std::min(breaks_->next(j + 1), last);
        std::size_t first;
        if (b >= a + 3 && width == 4) {
            first = std::clamp<std::size_t>(j == 0 ? 0 : j - 1, a, b - 3);
        } else {
            first = std::clamp<std::size_t>(j == 0 ? 0 : j - 1, 0, last + 1 - width);
        }
        Vector acc = Vector::Zero(data_.rows());
        for (std::size_t k = first; k < first + width; ++k) {
            double l = 1.0;
            for (std::size_t i = first; i < first + width; ++i) {
                if (i != k) l *= (u - static_cast<double>(i)) / (static_cast<double>(k) - static_cast<double>(i));
            }
            acc += l * data_.col(static_cast<Index>(k));
        }
        return acc;
    }

private:
    Vector sample(std::size_t k) const {
        if (k >= count_) throw NumericalError("lookup past the recorded trajectory at sample " + std::to_string(k));
        return data_.col(static_cast<Index>(k));
    }

    Matrix data_;
    std::size_t count_ = 0;
    double dt_;
    const Breakpoints* breaks_;
    std::function<Vector(double)> before_;
};

/// The state with its derivative, read back by cubic Hermite interpolation on one step.
class StateSeries {
public:
    StateSeries(Index dim, std::size_t capacity, double dt, const HistoryFunction* history)
        : x_(Matrix::Zero(dim, static_cast<Index>(capacity))), xd_(Matrix::Zero(dim, static_cast<Index>(capacity))),
          dt_(dt), history_(history) {}

    void push(const Vector& x, const Vector& xdot) {
        x_.col(static_cast<Index>(count_)) = x;
        xd_.col(static_cast<Index>(count_)) = xdot;
        ++count_;
    }

    Vector at(double t, int side) const {
        if (before_start(t, side)) return (*history_)(std::min(t, 0.0));
        const double u = std::max(t, 0.0) / dt_;
        const double nearest = std::round(u);
        if (std::abs(u - nearest) < kGridTol) {
            const auto k = static_cast<Index>(nearest);
            if (static_cast<std::size_t>(k) >= count_) throw NumericalError("state lookup past the recorded trajectory");
            return x_.col(k);
        }
        const auto j = static_cast<Index>(std::floor(u));
        if (static_cast<std::size_t>(j + 1) >= count_) throw NumericalError("state lookup past the recorded trajectory");
        const double th = u - static_cast<double>(j);
        const double th2 = th * th, th3 = th2 * th;
        return (2 * th3 - 3 * th2 + 1) * x_.col(j) + (th3 - 2 * th2 + th) * dt_ * xd_.col(j) +
               (-2 * th3 + 3 * th2) * x_.col(j + 1) + (th3 - th2) * dt_ * xd_.col(j + 1);
    }

private:
    Matrix x_, xd_;
    std::size_t count_ = 0;
    double dt_;
    const HistoryFunction* history_;
};

Vector delayed_input(const SignalDescriptor& s, double t, int side) {
    if (before_start(t, side)) return Vector::Zero(s.dim());
    return s.value(std::max(t, 0.0));
}

void require_rk4(const SimConfig& cfg) {
    if (cfg.integrator == Integrator::ImplicitTrapezoid) {
        throw ValidationError("delay representations are integrated by RK4 only");
    }
}

void require_finite(const Vector& state, double t) {
    if (!state.allFinite()) throw NumericalError("simulation diverged: non-finite state at t = " + std::to_string(t));
}

/// Classic RK4 over the uniform grid.  `rhs(t, y, side, record)` returns dy/dt and, when
/// record is set, stores the outputs of the sample at t.
template <class Rhs>
void integrate_rk4(Vector y, std::size_t steps, double dt, Rhs&& rhs) {
    Vector k1 = rhs(0.0, y, kRight, true);
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        const double tn = static_cast<double>(k + 1) * dt;
        const Vector k2 = rhs(t + 0.5 * dt, y + 0.5 * dt * k1, kInterior, false);
        const Vector k3 = rhs(t + 0.5 * dt, y + 0.5 * dt * k2, kInterior, false);
        const Vector k4 = rhs(tn, y + dt * k3, kLeft, false);
        y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        require_finite(y, tn);
        k1 = rhs(tn, y, kRight, true);
    }
}

Trajectory empty_trajectory(const std::string& rep, double dt, std::size_t steps, Index n, Index m, Index p,
                            Index q, Index r, Index nv) {
    Trajectory tr;
    tr.representation = rep;
    tr.dt = dt;
    tr.t.resize(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) tr.t[k] = static_cast<double>(k) * dt;
    const auto cols = static_cast<Index>(steps + 1);
    tr.x = Matrix::Zero(n, cols);
    tr.xdot = Matrix::Zero(n, cols);
    tr.y = Matrix::Zero(r, cols);
    tr.z = Matrix::Zero(q, cols);
    tr.v = Matrix::Zero(nv, cols);
    tr.w = Matrix::Zero(m, cols);
    tr.u = Matrix::Zero(p, cols);
    return tr;
}

/// Composite Gauss-Legendre rule on [0, 1], rescaled per call.
const quad::Rule& unit_panels() {
    static const quad::Rule rule = [] {
        quad::Rule out;
        for (std::size_t k = 0; k < kPanels; ++k) {
            const auto r = quad::gauss_legendre(kPanelNodes, static_cast<double>(k) / kPanels,
                                                static_cast<double>(k + 1) / kPanels);
            out.nodes.insert(out.nodes.end(), r.nodes.begin(), r.nodes.end());
            out.weights.insert(out.weights.end(), r.weights.begin(), r.weights.end());
        }
        return out;
    }();
    return rule;
}

/// Coefficients of s^j of a univariate kernel, dropped entirely when zero.
std::vector<Matrix> moment_coeffs(const PolyKernel& k) {
    if (k.is_zero()) return {};
    const PolyKernel t = k.trimmed();
    std::vector<Matrix> out;
    for (int j = 0; j <= t.effective_degree(); ++j) out.push_back(t.coeff(j));
    return out;
}

// ---------------------------------------------------------------------------------------------
// DDE and NDS

struct RetardedDelay {
    double tau = 0.0;
    Matrix G;                 ///< (n+q+r) x (2n+m+p): columns act on [x; w; u; xdot](t - tau)
    Matrix Ke0;               ///< neutral kernel at s = 0, acting on x(t)
    std::vector<Matrix> Kx;   ///< moment coefficients on x
    PolyKernel Kwu;           ///< kernel on [w; u](t + s)
    bool has_wu = false;
    bool has_neutral = false;
    Index moment_offset = 0;
};

Trajectory run_retarded(const NDSSpec& nds, const HistoryFunction& x0, const SignalDescriptor& w,
                        const SignalDescriptor& u, const SimConfig& cfg, const std::string& rep) {
    const DDESpec& d = nds.base;
    const Dims& dm = d.dims;
    const Index n = dm.n, m = dm.m, p = dm.p, q = dm.q, r = dm.r;
    const Index H = n + q + r;
    cfg.check(min_delay(d.delays));
    require_rk4(cfg);
    if (w.dim() != m || u.dim() != p) throw DimensionError("input descriptors do not match (m, p)");
    if (x0.dim() != n) throw DimensionError("x0 history dim differs from the state dim");
    if (!d.delays.empty() && x0.lower() > -d.delays.back() + 1e-12 * d.delays.back()) {
        throw ValidationError("x0 history must cover [-tau_K, 0]");
    }

    std::vector<RetardedDelay> delays;
    Index state_dim = n;
    for (std::size_t i = 0; i < d.delays.size(); ++i) {
        RetardedDelay rd;
        rd.tau = d.delays[i];
        rd.G = nds.stacked(i);
        const PolyKernel K = nds.stacked_kernel(i);
        const Matrix sel_x = Matrix::Identity(2 * n + m + p, 2 * n + m + p);
        const PolyKernel Kx = K * sel_x.leftCols(n);
        const PolyKernel Kwu = K * sel_x.middleCols(n, m + p);
        const PolyKernel Ke = K * sel_x.rightCols(n);
        // Integration by parts moves the neutral kernel from xdot onto x.
        rd.Ke0 = Ke(0.0);
        rd.G.leftCols(n) -= Ke(-rd.tau);
        rd.Kx = moment_coeffs(Kx - Ke.derivative().with_lower(-rd.tau));
        rd.Kwu = Kwu;
        rd.has_wu = !Kwu.is_zero();
        rd.has_neutral = !rd.G.rightCols(n).isZero(0.0) || !Ke.is_zero();
        rd.moment_offset = state_dim;
        state_dim += n * static_cast<Index>(rd.Kx.size());
        delays.push_back(rd);
    }

    const std::size_t steps = cfg.steps();
    const double dt = cfg.dt;
    const Breakpoints breaks(d.delays, dt, steps);
    StateSeries xs(n, steps + 1, dt, &x0);
    ChannelSeries xds(n, steps + 1, dt, &breaks, [&](double s) { return x0.derivative(s); });
    Trajectory tr = empty_trajectory(rep, dt, steps, n, m, p, q, r, H);

    const Matrix inst = d.instantaneous();
    const auto& panels = unit_panels();
    Vector y0 = Vector::Zero(state_dim);
    y0.head(n) = x0(0.0);
    for (const auto& rd : delays) {
        const HistoryFunction hx = x0.restricted(-rd.tau);
        for (std::size_t j = 0; j < rd.Kx.size(); ++j) {
            y0.segment(rd.moment_offset + static_cast<Index>(j) * n, n) = hx.moment(static_cast<int>(j));
        }
    }

    Vector xwu(n + m + p), col(2 * n + m + p);
    std::size_t sample = 0;
    auto rhs = [&](double t, const Vector& y, int side, bool record) -> Vector {
        const auto x = y.head(n);
        const Vector wt = w.value(t);
        const Vector ut = u.value(t);
        xwu << x, wt, ut;
        Vector delayed = Vector::Zero(H);
        Vector dy(y.size());
        for (const auto& rd : delays) {
            const double s = t - rd.tau;
            const Vector xd = xs.at(s, side);
            col.head(n) = xd;
            col.segment(n, m) = delayed_input(w, s, side);
            col.segment(n + m, p) = delayed_input(u, s, side);
            if (rd.has_neutral) {
                col.tail(n) = xds.at(s, side);
            } else {
                col.tail(n).setZero();
            }
            delayed.noalias() += rd.G * col;
            if (rd.has_neutral) delayed.noalias() += rd.Ke0 * x;
            for (std::size_t j = 0; j < rd.Kx.size(); ++j) {
                const Index off = rd.moment_offset + static_cast<Index>(j) * n;
                delayed.noalias() += rd.Kx[j] * y.segment(off, n);
                Vector mdot = -std::pow(-rd.tau, static_cast<double>(j)) * xd;
                if (j == 0) mdot += x;
                else mdot -= static_cast<double>(j) * y.segment(off - n, n);
                dy.segment(off, n) = mdot;
            }
            if (rd.has_wu && t > 0.0) {
                const double a = std::max(-rd.tau, -t);
                Vector wu(m + p);
                for (std::size_t k = 0; k < panels.nodes.size(); ++k) {
                    const double sk = a * (1.0 - panels.nodes[k]);
                    wu << w.value(t + sk), u.value(t + sk);
                    delayed.noalias() += (-a * panels.weights[k]) * (rd.Kwu(sk) * wu);
                }
            }
        }
        const Vector out = inst * xwu + delayed;
        dy.head(n) = out.head(n);
        if (record) {
            const auto c = static_cast<Index>(sample);
            tr.x.col(c) = x;
            tr.xdot.col(c) = out.head(n);
            tr.z.col(c) = out.segment(n, q);
            tr.y.col(c) = out.tail(r);
            tr.v.col(c) = delayed;
            tr.w.col(c) = wt;
            tr.u.col(c) = ut;
            xs.push(x, out.head(n));
            xds.push(out.head(n));
            ++sample;
        }
        return dy;
    };
    integrate_rk4(y0, steps, dt, rhs);
    logging::debug("simulated " + rep + " with " + std::to_string(steps) + " steps");
    return tr;
}

// ---------------------------------------------------------------------------------------------
// DDF and ODE-PDE

struct ChannelPlan {
    double tau = 0.0;
    std::vector<Matrix> Kv;  ///< moment coefficients of C_vdi
    Index moment_offset = 0;
    Index dim = 0;
};

struct DdfRun {
    Trajectory traj;
    std::vector<ChannelSeries> channels;
    std::unique_ptr<Breakpoints> breaks;
};

DdfRun run_ddf(const DDFSpec& f, const Vector& x0, const std::vector<HistoryFunction>& r0,
               const SignalDescriptor& w, const SignalDescriptor& u, const SimConfig& cfg, const std::string& rep) {
    const Dims& dm = f.dims;
    const Index n = dm.n, m = dm.m, p = dm.p, q = dm.q, r = dm.r, nv = dm.n_v;
    cfg.check(min_delay(f.delays));
    require_rk4(cfg);
    if (w.dim() != m || u.dim() != p) throw DimensionError("input descriptors do not match (m, p)");
    require_shape(x0, n, 1, "x0");
    if (r0.size() != f.delays.size()) throw DimensionError("one channel history per delay required");
    for (std::size_t i = 0; i < r0.size(); ++i) {
        if (r0[i].dim() != dm.p_i[i]) throw DimensionError("channel history " + std::to_string(i) + " has the wrong dim");
    }
    const double sewing = max_residual(check_sewing_ddf(f, x0, r0));
    if (sewing > kSewingTolerance) {
        throw ValidationError("sewing condition violated: residual " + std::to_string(sewing));
    }

    std::vector<ChannelPlan> plan;
    Index state_dim = n;
    for (std::size_t i = 0; i < f.delays.size(); ++i) {
        ChannelPlan cp;
        cp.tau = f.delays[i];
        cp.dim = dm.p_i[i];
        cp.Kv = moment_coeffs(f.channels[i].Cvd);
        cp.moment_offset = state_dim;
        state_dim += cp.dim * static_cast<Index>(cp.Kv.size());
        plan.push_back(cp);
    }

    const std::size_t steps = cfg.steps();
    const double dt = cfg.dt;
    DdfRun run;
    run.breaks = std::make_unique<Breakpoints>(f.delays, dt, steps);
    run.channels.reserve(plan.size());
    for (std::size_t i = 0; i < plan.size(); ++i) {
        const HistoryFunction* h = &r0[i];
        run.channels.emplace_back(plan[i].dim, steps + 1, dt, run.breaks.get(), [h](double s) { return (*h)(s); });
    }
    run.traj = empty_trajectory(rep, dt, steps, n, m, p, q, r, nv);
    Trajectory& tr = run.traj;

    Vector y0 = Vector::Zero(state_dim);
    y0.head(n) = x0;
    for (std::size_t i = 0; i < plan.size(); ++i) {
        for (std::size_t j = 0; j < plan[i].Kv.size(); ++j) {
            y0.segment(plan[i].moment_offset + static_cast<Index>(j) * plan[i].dim, plan[i].dim) =
                r0[i].moment(static_cast<int>(j));
        }
    }

    std::vector<Vector> now(plan.size()), past(plan.size());
    std::size_t sample = 0;
    auto rhs = [&](double t, const Vector& y, int side, bool record) -> Vector {
        const auto x = y.head(n);
        const Vector wt = w.value(t);
        const Vector ut = u.value(t);
        Vector v = Vector::Zero(nv);
        for (std::size_t i = 0; i < plan.size(); ++i) {
            const auto& cp = plan[i];
            past[i] = run.channels[i].at(t - cp.tau, side);
            v.noalias() += f.channels[i].Cv * past[i];
            for (std::size_t j = 0; j < cp.Kv.size(); ++j) {
                v.noalias() += cp.Kv[j] * y.segment(cp.moment_offset + static_cast<Index>(j) * cp.dim, cp.dim);
            }
        }
        Vector dy(y.size());
        const Vector xdot = f.A0 * x + f.B1 * wt + f.B2 * ut + f.Bv * v;
        dy.head(n) = xdot;
        for (std::size_t i = 0; i < plan.size(); ++i) {
            const auto& cp = plan[i];
            const auto& ch = f.channels[i];
            now[i] = ch.Cr * x + ch.Br1 * wt + ch.Br2 * ut + ch.Drv * v;
            for (std::size_t j = 0; j < cp.Kv.size(); ++j) {
                const Index off = cp.moment_offset + static_cast<Index>(j) * cp.dim;
                Vector mdot = -std::pow(-cp.tau, static_cast<double>(j)) * past[i];
                if (j == 0) mdot += now[i];
                else mdot -= static_cast<double>(j) * y.segment(off - cp.dim, cp.dim);
                dy.segment(off, cp.dim) = mdot;
            }
        }
        if (record) {
            const auto c = static_cast<Index>(sample);
            tr.x.col(c) = x;
            tr.xdot.col(c) = xdot;
            tr.z.col(c) = f.C1 * x + f.D11 * wt + f.D12 * ut + f.D1v * v;
            tr.y.col(c) = f.C2 * x + f.D21 * wt + f.D22 * ut + f.D2v * v;
            tr.v.col(c) = v;
            tr.w.col(c) = wt;
            tr.u.col(c) = ut;
            for (std::size_t i = 0; i < plan.size(); ++i) run.channels[i].push(now[i]);
            ++sample;
        }
        return dy;
    };
    integrate_rk4(y0, steps, dt, rhs);
    for (const auto& ch : run.channels) tr.channels.push_back(ch.recorded());
    logging::debug("simulated " + rep + " with " + std::to_string(steps) + " steps");
    return run;
}

}  // namespace

Trajectory simulate_dde(const DDESpec& dde, const HistoryFunction& x0, const SignalDescriptor& w,
                        const SignalDescriptor& u, const SimConfig& cfg) {
    throw_if_invalid(validate(dde), "simulate_dde");
    throw_if_invalid(validate_inputs(input_requirements(dde), dde.dims.m, dde.dims.p, w, u), "simulate_dde inputs");
    NDSSpec nds = NDSSpec::zeros(dde.dims.n, dde.dims.m, dde.dims.p, dde.dims.q, dde.dims.r, dde.delays);
    nds.base = dde;
    return run_retarded(nds, x0, w, u, cfg, "dde");
}

Trajectory simulate_nds(const NDSSpec& nds, const SignalDescriptor& w, const SignalDescriptor& u,
                        const SimConfig& cfg) {
    throw_if_invalid(validate(nds), "simulate_nds");
    throw_if_invalid(validate_inputs(input_requirements(nds), nds.dims().m, nds.dims().p, w, u),
                     "simulate_nds inputs");
    const double lower = nds.base.delays.empty() ? -1.0 : -nds.base.delays.back();
    const HistoryFunction x0 = HistoryFunction::zero(nds.dims().n, lower);
    return run_retarded(nds, x0, w, u, cfg, "nds");
}

Trajectory simulate_ddf(const DDFSpec& ddf, const Vector& x0, const std::vector<HistoryFunction>& r0,
                        const SignalDescriptor& w, const SignalDescriptor& u, const SimConfig& cfg) {
    throw_if_invalid(validate(ddf), "simulate_ddf");
    throw_if_invalid(validate_inputs(input_requirements(ddf), ddf.dims.m, ddf.dims.p, w, u), "simulate_ddf inputs");
    return std::move(run_ddf(ddf, x0, r0, w, u, cfg, "ddf").traj);
}

Trajectory simulate_odepde(const ODEPDESpec& odepde, const Vector& x0, const std::vector<HistoryFunction>& phi0,
                           const SignalDescriptor& w, const SignalDescriptor& u, const SimConfig& cfg) {
    const DDFSpec& f = odepde.body;
    throw_if_invalid(validate(odepde), "simulate_odepde");
    throw_if_invalid(validate_inputs(input_requirements(f), f.dims.m, f.dims.p, w, u), "simulate_odepde inputs");
    const double sewing = max_residual(check_sewing_odepde(odepde, x0, phi0));
    if (sewing > kSewingTolerance) {
        throw ValidationError("sewing condition violated: residual " + std::to_string(sewing));
    }
    const auto r0 = odepde_to_ddf_history(phi0, f.delays);
    DdfRun run = run_ddf(f, x0, r0, w, u, cfg, "odepde");
    Trajectory& tr = run.traj;
    tr.nodes = quad::cgl_nodes(cfg.order);
    const auto M = static_cast<Index>(tr.nodes.size());
    tr.channels.clear();
    for (std::size_t i = 0; i < f.delays.size(); ++i) {
        const Index pi = f.dims.p_i[i];
        Matrix phi(pi * M, tr.samples());
        for (Index k = 0; k < tr.samples(); ++k) {
            for (Index j = 0; j < M; ++j) {
                const double s = tr.t[static_cast<std::size_t>(k)] + f.delays[i] * tr.nodes[static_cast<std::size_t>(j)];
                const Vector val = run.channels[i].at(s, kRight);
                for (Index c = 0; c < pi; ++c) phi(c * M + j, k) = val(c);
            }
        }
        tr.channels.push_back(std::move(phi));
    }
    return std::move(tr);
}

}  // namespace delayrep
