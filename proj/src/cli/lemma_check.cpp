#include "delayrep/cli/lemma_check.hpp"

#include "delayrep/convert/dde_ddf.hpp"
#include "delayrep/convert/pie.hpp"
#include "delayrep/simulate/simulate.hpp"
#include "delayrep/util/log.hpp"

#include "initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace delayrep::cli {

namespace {

/// Running maximum of |reference - candidate| for one named quantity.
class Deviation {
public:
    explicit Deviation(std::string name) { d_.signal = std::move(name); }

    void add(const Vector& candidate, const Vector& reference, double t) {
        const double err = candidate.size() ? (candidate - reference).cwiseAbs().maxCoeff() : 0.0;
        const double mag = reference.size() ? reference.cwiseAbs().maxCoeff() : 0.0;
        peak_ = std::max(peak_, mag);
        if (!(err <= d_.max_abs)) {
            d_.max_abs = err;
            d_.t_at_max = t;
        }
    }

    SignalDeviation result() const {
        SignalDeviation out = d_;
        out.max_rel = peak_ > 0.0 ? d_.max_abs / peak_ : d_.max_abs;
        return out;
    }

private:
    SignalDeviation d_;
    double peak_ = 0.0;
};

/// Grid-aligned sums of delays up to t_end: the points where solutions may lose smoothness.
std::vector<double> breakpoints(const std::vector<double>& delays, double dt, double t_end) {
    std::set<long long> ticks{0};
    std::vector<long long> frontier{0};
    while (!frontier.empty() && ticks.size() < 20000) {
        std::vector<long long> next;
        for (long long b : frontier) {
            for (double tau : delays) {
                const long long k = b + std::llround(tau / dt);
                if (static_cast<double>(k) * dt <= t_end + 0.5 * dt && ticks.insert(k).second) next.push_back(k);
            }
        }
        frontier = std::move(next);
    }
    std::vector<double> out;
    for (long long k : ticks) out.push_back(static_cast<double>(k) * dt);
    return out;
}

/// Cubic Lagrange interpolation of uniformly sampled data.  The stencil stays inside the
/// smooth piece between two breakpoints whenever that piece holds four samples.
Vector sample_at(const Matrix& samples, double dt, double t, const std::vector<double>& breaks) {
    const Index count = samples.cols();
    const double pos = t / dt;
    const double nearest = std::round(pos);
    if (std::abs(pos - nearest) < 1e-9 && nearest >= 0 && nearest < static_cast<double>(count)) {
        return samples.col(static_cast<Index>(nearest));
    }
    if (count < 4) throw DomainError("too few samples to interpolate");
    Index lo = 0, hi = count - 1;
    const auto it = std::upper_bound(breaks.begin(), breaks.end(), t);
    if (it != breaks.begin()) lo = std::max<Index>(0, std::llround(*std::prev(it) / dt));
    if (it != breaks.end()) hi = std::min<Index>(count - 1, std::llround(*it / dt));
    if (hi - lo < 3) {
        lo = 0;
        hi = count - 1;
    }
    const Index k0 = std::clamp<Index>(static_cast<Index>(std::floor(pos)) - 1, lo, hi - 3);
    Vector acc = Vector::Zero(samples.rows());
    for (Index a = k0; a < k0 + 4; ++a) {
        double l = 1.0;
        for (Index b = k0; b < k0 + 4; ++b) {
            if (a != b) l *= (pos - static_cast<double>(b)) / static_cast<double>(a - b);
        }
        acc += l * samples.col(a);
    }
    return acc;
}

double horizon(const std::vector<double>& delays) { return delays.empty() ? 1.0 : 3.0 * delays.back(); }

struct Inputs {
    SignalDescriptor w, u;
};

/// Lemma 4 defaults to inputs that vanish to first order at t = 0: a kink in the transport
/// profile slows the spectral convergence of the PIE collocation.
Inputs inputs_for(const LemmaOptions& opts, int lemma, Index m, Index p) {
    const bool smooth = lemma == 4;
    return {SignalDescriptor::parse(opts.w.value_or(smooth ? "poly:0,0,1" : "sin:1:3:0"), m),
            SignalDescriptor::parse(opts.u.value_or(smooth ? "poly:0,0,0.5" : "sin:0.5:2:0"), p)};
}

SimConfig config_for(const LemmaOptions& opts, const std::vector<double>& delays) {
    SimConfig cfg;
    cfg.dt = opts.dt.value_or(1e-3);
    cfg.t_final = opts.t_final.value_or(horizon(delays));
    cfg.order = opts.order;
    return cfg;
}

/// A DDF plus matching channel histories, from any delay representation in the file.
struct DdfProblem {
    DDFSpec ddf;
    Vector x0;
    std::vector<HistoryFunction> r0;
};

DdfProblem ddf_problem(const io::SpecFile& file, const LemmaOptions& opts, const std::string& dde_x0) {
    if (const auto* dde = std::get_if<DDESpec>(&file.spec)) {
        const HistoryFunction hist = dde_history(*dde, opts.x0.value_or(dde_x0));
        return {dde_to_ddf(*dde), hist(0.0), dde_channel_histories(*dde, hist)};
    }
    if (const auto* nds = std::get_if<NDSSpec>(&file.spec)) {
        DDFSpec ddf = nds_to_ddf(*nds);
        const Vector x0 = Vector::Zero(ddf.dims.n);
        return {ddf, x0, zero_histories(ddf)};
    }
    DDFSpec ddf;
    if (const auto* f = std::get_if<DDFSpec>(&file.spec)) ddf = *f;
    else if (const auto* o = std::get_if<ODEPDESpec>(&file.spec)) ddf = odepde_to_ddf(*o);
    else throw ValidationError("this lemma check needs a DDE, NDS, DDF or ODEPDE spec");
    return {ddf, state_vector(ddf.dims.n, opts.x0.value_or("zero")), zero_histories(ddf)};
}

void add_trajectory_deviations(LemmaReport& rep, const Trajectory& a, const Trajectory& b,
                               const std::vector<std::string>& signals, const std::string& suffix = "") {
    for (auto d : compare(a, b, signals).deviations) {
        d.signal += suffix;
        rep.deviations.push_back(d);
    }
}

/// phi_i(t_k, s_j) (or the PIE reconstruction) against r_i(t_k + tau_i s_j).
SignalDeviation transport_deviation(const std::string& name, const Trajectory& transport, const Trajectory& ddf,
                                    const DdfProblem& prob) {
    Deviation dev(name);
    const auto M = static_cast<Index>(transport.nodes.size());
    const auto breaks = breakpoints(prob.ddf.delays, ddf.dt, ddf.t.back());
    for (std::size_t i = 0; i < prob.ddf.delays.size(); ++i) {
        const double tau = prob.ddf.delays[i];
        const Index pi = prob.ddf.dims.p_i[i];
        for (Index k = 0; k < transport.samples(); ++k) {
            const double t = transport.t[static_cast<std::size_t>(k)];
            for (Index j = 0; j < M; ++j) {
                const double arg = t + tau * transport.nodes[static_cast<std::size_t>(j)];
                const Vector ref = arg <= 0.0 ? prob.r0[i](arg) : sample_at(ddf.channels[i], ddf.dt, arg, breaks);
                Vector got(pi);
                for (Index c = 0; c < pi; ++c) got(c) = transport.channels[i](c * M + j, k);
                dev.add(got, ref, t);
            }
        }
    }
    return dev.result();
}

LemmaReport lemma1(const io::SpecFile& file, const LemmaOptions& opts) {
    const auto* dde = std::get_if<DDESpec>(&file.spec);
    if (!dde) throw ValidationError("lemma 1 compares a DDE with its DDF, got a " + file.type() + " file");
    const SimConfig cfg = config_for(opts, dde->delays);
    const auto [w, u] = inputs_for(opts, 1, dde->dims.m, dde->dims.p);
    const HistoryFunction hist = dde_history(*dde, opts.x0.value_or("const:1"));
    const Trajectory a = simulate_dde(*dde, hist, w, u, cfg);
    const Trajectory b = simulate_ddf(dde_to_ddf(*dde), hist(0.0), dde_channel_histories(*dde, hist), w, u, cfg);
    LemmaReport rep;
    add_trajectory_deviations(rep, b, a, {"x", "y", "z", "v"});
    return rep;
}

LemmaReport lemma2(const io::SpecFile& file, const LemmaOptions& opts) {
    const auto* nds = std::get_if<NDSSpec>(&file.spec);
    if (!nds) throw ValidationError("lemma 2 compares an NDS with its DDF, got a " + file.type() + " file");
    const SimConfig cfg = config_for(opts, nds->base.delays);
    const auto [w, u] = inputs_for(opts, 2, nds->dims().m, nds->dims().p);
    const Trajectory a = simulate_nds(*nds, w, u, cfg);
    const DDFSpec ddf = nds_to_ddf(*nds);
    const Trajectory b = simulate_ddf(ddf, Vector::Zero(ddf.dims.n), zero_histories(ddf), w, u, cfg);
    LemmaReport rep;
    add_trajectory_deviations(rep, b, a, {"x", "y", "z"});
    if (nds->is_retarded()) {
        const HistoryFunction zero = HistoryFunction::zero(nds->dims().n, nds->base.delays.empty() ? -1.0 : -nds->base.delays.back());
        add_trajectory_deviations(rep, b, simulate_dde(nds->base, zero, w, u, cfg), {"x", "y", "z"}, "(dde)");
    }
    return rep;
}

LemmaReport lemma3(const io::SpecFile& file, const LemmaOptions& opts) {
    const DdfProblem prob = ddf_problem(file, opts, "const:1");
    const SimConfig cfg = config_for(opts, prob.ddf.delays);
    const auto [w, u] = inputs_for(opts, 3, prob.ddf.dims.m, prob.ddf.dims.p);
    const Trajectory d = simulate_ddf(prob.ddf, prob.x0, prob.r0, w, u, cfg);
    const Trajectory o = simulate_odepde(ddf_to_odepde(prob.ddf), prob.x0,
                                         ddf_to_odepde_history(prob.r0, prob.ddf.delays), w, u, cfg);
    LemmaReport rep;
    add_trajectory_deviations(rep, o, d, {"x", "y", "z"});
    rep.deviations.push_back(transport_deviation("phi", o, d, prob));
    return rep;
}

LemmaReport lemma4(const io::SpecFile& file, const LemmaOptions& opts) {
    const DdfProblem prob = ddf_problem(file, opts, "zero");
    const SimConfig cfg = config_for(opts, prob.ddf.delays);
    const auto [w, u] = inputs_for(opts, 4, prob.ddf.dims.m, prob.ddf.dims.p);
    const Trajectory d = simulate_ddf(prob.ddf, prob.x0, prob.r0, w, u, cfg);
    const PIESpec pie = ddf_to_pie(prob.ddf);
    const Trajectory p = simulate_pie(pie, pie_initial_state(pie, prob.x0, prob.r0), w, u, cfg);
    LemmaReport rep;
    add_trajectory_deviations(rep, p, d, {"y", "z", "x"});
    rep.deviations.push_back(transport_deviation("reconstruction", p, d, prob));
    return rep;
}

LemmaReport lemma5(const io::SpecFile& file, const LemmaOptions& opts) {
    const auto* ddf = std::get_if<DDFSpec>(&file.spec);
    if (!ddf || !file.sof) throw ValidationError("lemma 5 needs a DDF spec with a sof_plant section (see `demo sof`)");
    const SofPlant& plant = file.sof->plant;
    const Matrix& F = file.sof->F;
    const SimConfig cfg = config_for(opts, ddf->delays);
    const auto w = inputs_for(opts, 5, ddf->dims.m, 0).w;
    const auto u = SignalDescriptor::zeros(ddf->dims.p);
    const Vector x0 = state_vector(ddf->dims.n, opts.x0.value_or("zero"));
    const std::vector<HistoryFunction> r0 = zero_histories(*ddf);
    const Trajectory tr = simulate_ddf(*ddf, x0, r0, w, u, cfg);

    const auto breaks = breakpoints(ddf->delays, tr.dt, tr.t.back());
    Deviation dy("y recursion"), dx("xdot recursion"), dz("z output");
    for (Index k = 0; k < tr.samples(); ++k) {
        const double t = tr.t[static_cast<std::size_t>(k)];
        const Vector x = tr.x.col(k);
        const Vector wk = tr.w.col(k);
        Vector y_rhs = plant.C2 * x + plant.D21 * wk;
        Vector x_rhs = plant.A0 * x + plant.B1 * wk;
        for (std::size_t i = 0; i < plant.delays.size(); ++i) {
            const double back = t - plant.delays[i];
            // F y(t - tau_i) on the history interval is the channel history r_i0.
            const Vector Fy = back < -1e-12 ? Vector(r0[i](back)) : Vector(F * sample_at(tr.y, tr.dt, std::max(back, 0.0), breaks));
            y_rhs += plant.D22[i] * Fy;
            x_rhs += plant.B2[i] * Fy;
        }
        dy.add(tr.y.col(k), y_rhs, t);
        dx.add(tr.xdot.col(k), x_rhs, t);
        dz.add(tr.z.col(k), plant.C1 * x + plant.D12 * (F * tr.y.col(k)), t);
    }
    LemmaReport rep;
    rep.deviations = {dy.result(), dx.result(), dz.result()};
    return rep;
}

}  // namespace

double LemmaReport::max_deviation() const {
    double m = 0.0;
    for (const auto& d : deviations) {
        if (!(d.max_abs <= m)) m = d.max_abs;
    }
    return m;
}

double default_lemma_tolerance(int lemma) {
    switch (lemma) {
        case 1:
        case 2:
            return 1e-8;
        case 3:
            return 1e-10;
        case 4:
            return 1e-3;
        case 5:
            return 1e-9;
        default:
            throw ValidationError("lemma must be 1, 2, 3, 4 or 5");
    }
}

LemmaReport check_lemma(const io::SpecFile& file, int lemma, const LemmaOptions& opts) {
    const double tol = opts.tolerance.value_or(default_lemma_tolerance(lemma));
    LemmaReport rep;
    switch (lemma) {
        case 1: rep = lemma1(file, opts); break;
        case 2: rep = lemma2(file, opts); break;
        case 3: rep = lemma3(file, opts); break;
        case 4: rep = lemma4(file, opts); break;
        default: rep = lemma5(file, opts); break;
    }
    rep.lemma = lemma;
    rep.tolerance = tol;
    logging::info("lemma " + std::to_string(lemma) + " check: max deviation " + std::to_string(rep.max_deviation()));
    return rep;
}

}  // namespace delayrep::cli
