#include "catch_amalgamated.hpp"

#include "delayrep/convert/dde_ddf.hpp"
#include "delayrep/convert/pie.hpp"
#include "delayrep/convert/sof.hpp"
#include "delayrep/models/shower.hpp"
#include "delayrep/simulate/simulate.hpp"

#include "support/oracles.hpp"

#include <chrono>
#include <cmath>

using namespace delayrep;
using Catch::Matchers::WithinAbs;

namespace {

Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

SimConfig config(double tf, double dt = 1e-3, std::size_t order = 16) {
    SimConfig c;
    c.t_final = tf;
    c.dt = dt;
    c.order = order;
    return c;
}

DDESpec negative_feedback() {
    DDESpec d = DDESpec::zeros(1, 0, 0, 0, 0, {1.0});
    d.delayed[0].A = scalar(-1.0);
    return d;
}

double oracle_error(const Trajectory& tr) {
    double worst = 0.0;
    for (Index k = 0; k < tr.samples(); ++k) {
        worst = std::max(worst, std::abs(tr.x(0, k) - oracle::method_of_steps(tr.t[static_cast<std::size_t>(k)])));
    }
    return worst;
}

/// Largest gap between a fine and a coarse run at the coarse grid points.
double refinement_gap(const Trajectory& coarse, const Trajectory& fine, const std::string& signal) {
    const Index stride = static_cast<Index>(std::lround(coarse.dt / fine.dt));
    const Matrix& a = coarse.signal(signal);
    const Matrix& b = fine.signal(signal);
    double worst = 0.0;
    for (Index k = 0; k < a.cols() && k * stride < b.cols(); ++k) {
        worst = std::max(worst, (a.col(k) - b.col(k * stride)).cwiseAbs().maxCoeff());
    }
    return worst;
}

/// Classical RK4 for xdot = A x + B w(t) with the state carried on the same grid.
Matrix reference_ode(const Matrix& A, const Matrix& B, const SignalDescriptor& w, const Vector& x0, double dt,
                     std::size_t steps) {
    Matrix out(x0.size(), static_cast<Index>(steps + 1));
    Vector x = x0;
    out.col(0) = x;
    auto f = [&](double t, const Vector& s) -> Vector { return A * s + B * w.value(t); };
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        const Vector k1 = f(t, x);
        const Vector k2 = f(t + dt / 2, x + dt / 2 * k1);
        const Vector k3 = f(t + dt / 2, x + dt / 2 * k2);
        const Vector k4 = f(t + dt, x + dt * k3);
        x += dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        out.col(static_cast<Index>(k + 1)) = x;
    }
    return out;
}

std::vector<HistoryFunction> zero_channels(const DDFSpec& f) {
    std::vector<HistoryFunction> r0;
    for (std::size_t i = 0; i < f.channels.size(); ++i) {
        r0.push_back(HistoryFunction::zero(f.channels[i].Cr.rows(), -f.delays[i], static_cast<int>(i)));
    }
    return r0;
}

double scaled_gap(const Trajectory& base, const Trajectory& scaled, double alpha) {
    double worst = 0.0, peak = 0.0;
    for (const char* s : {"x", "y", "z"}) {
        const Matrix& a = base.signal(s);
        const Matrix& b = scaled.signal(s);
        if (a.size() == 0) continue;
        worst = std::max(worst, (alpha * a - b).cwiseAbs().maxCoeff());
        peak = std::max(peak, alpha * a.cwiseAbs().maxCoeff());
    }
    return peak > 0 ? worst / peak : worst;
}

}  // namespace

TEST_CASE("method of steps oracle", "[simulate][dde]") {
    const DDESpec d = negative_feedback();
    const auto hist = HistoryFunction::constant(Vector::Ones(1), -1.0);
    const auto empty = SignalDescriptor::zeros(0);
    const auto start = std::chrono::steady_clock::now();
    const Trajectory tr = simulate_dde(d, hist, empty, empty, config(3.0));
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(oracle_error(tr) <= 1e-8);
    CHECK(seconds < 1.0);
    CHECK_THAT(tr.x(0, 500), WithinAbs(0.5, 1e-12));
    CHECK_THAT(tr.x(0, 1500), WithinAbs(1.0 - 1.5 + 0.125, 1e-10));
}

TEST_CASE("RK4 order against the analytic oracle", "[simulate][dde][property]") {
    const DDESpec d = negative_feedback();
    const auto hist = HistoryFunction::constant(Vector::Ones(1), -1.0);
    const auto empty = SignalDescriptor::zeros(0);
    std::vector<double> errors;
    for (double dt : {0.1, 0.05, 0.025}) errors.push_back(oracle_error(simulate_dde(d, hist, empty, empty, config(3.0, dt))));
    for (std::size_t k = 1; k < errors.size(); ++k) {
        if (errors[k] < 1e-11) continue;
        INFO("dt halving " << k << ": " << errors[k - 1] << " -> " << errors[k]);
        CHECK(errors[k - 1] / errors[k] >= 8.0);
    }
}

TEST_CASE("vanishing delay terms reduce to an ODE", "[simulate]") {
    oracle::Random rng(5);
    DDESpec d = DDESpec::zeros(3, 1, 0, 0, 0, {0.4, 0.9});
    d.A0 = rng.matrix(3, 3, 1.0);
    d.B1 = rng.matrix(3, 1, 1.0);
    const Vector x0 = rng.matrix(3, 1, 1.0);
    // The DDF route carries w through its channels, so w has to start from zero.
    const auto w = SignalDescriptor::parse("sin:1:2:0", 1);
    const auto empty = SignalDescriptor::zeros(0);
    const SimConfig cfg = config(2.0, 1e-3);
    const Matrix ref = reference_ode(d.A0, d.B1, w, x0, cfg.dt, cfg.steps());

    const Trajectory dde = simulate_dde(d, HistoryFunction::constant(x0, -0.9), w, empty, cfg);
    CHECK((dde.x - ref).cwiseAbs().maxCoeff() <= 1e-10);

    const DDFSpec f = dde_to_ddf(d);
    const Trajectory ddf = simulate_ddf(f, x0, dde_channel_histories(d, HistoryFunction::constant(x0, -0.9)), w, empty, cfg);
    CHECK((ddf.x - ref).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("shower trajectory satisfies its dynamics", "[simulate][models]") {
    // One user: T1' = T2 - w, T2' = w + u - T2(t - 1).
    const DDESpec d = build_shower_dde(ShowerParams::defaults(1));
    const auto w = SignalDescriptor::parse("const:1", 1);
    const auto u = SignalDescriptor::zeros(1);
    const SimConfig cfg = config(3.0);
    const Trajectory tr = simulate_dde(d, HistoryFunction::zero(2, -1.0), w, u, cfg);
    const Index lag = static_cast<Index>(std::lround(1.0 / cfg.dt));
    double worst = 0.0;
    for (Index k = 0; k < tr.samples(); ++k) {
        const double delayed = k >= lag ? tr.x(1, k - lag) : 0.0;
        worst = std::max(worst, std::abs(tr.xdot(0, k) - (tr.x(1, k) - 1.0)));
        worst = std::max(worst, std::abs(tr.xdot(1, k) - (1.0 - delayed)));
        worst = std::max(worst, std::abs(tr.z(0, k) - tr.x(0, k)));
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("DDE and its DDF agree", "[simulate][lemma][property]") {
    oracle::Random rng(2024);
    const auto w_text = "sin:1:3:0", u_text = "sin:0.5:2:0";
    for (int trial = 0; trial < 10; ++trial) {
        const DDESpec d = rng.dde(rng.integer(1, 3), rng.integer(0, 3), rng.integer(0, 3), rng.integer(0, 3),
                                  rng.integer(0, 3), static_cast<std::size_t>(rng.integer(1, 2)));
        const double tauK = d.delays.back();
        const Vector phase = rng.matrix(d.dims.n, 1, 1.0);
        const auto hist = HistoryFunction::sample(
            [&](double s) -> Vector { return (phase.array() + s).cos().matrix(); }, d.dims.n, -tauK, 257);
        const auto w = SignalDescriptor::parse(w_text, d.dims.m);
        const auto u = SignalDescriptor::parse(u_text, d.dims.p);
        const SimConfig cfg = config(3.0 * tauK);
        const Trajectory a = simulate_dde(d, hist, w, u, cfg);
        const Trajectory b = simulate_ddf(dde_to_ddf(d), hist(0.0), dde_channel_histories(d, hist), w, u, cfg);
        INFO("trial " << trial);
        CHECK(compare(b, a).max_abs() <= 1e-8);
        CHECK(compare(b, a, {"v"}).max_abs() <= 1e-8);
    }
}

TEST_CASE("neutral systems", "[simulate][nds]") {
    oracle::Random rng(77);
    SECTION("zero neutral blocks follow the plain DDE route") {
        for (int trial = 0; trial < 4; ++trial) {
            NDSSpec s;
            s.base = rng.dde(2, 1, 1, 1, 1, 2);
            const NDSSpec blank = NDSSpec::zeros(2, 1, 1, 1, 1, s.base.delays);
            s.neutral = blank.neutral;
            s.neutral_distributed = blank.neutral_distributed;
            const auto w = SignalDescriptor::parse("sin:1:3:0", 1);
            const auto u = SignalDescriptor::parse("sin:0.5:2:0", 1);
            const SimConfig cfg = config(3.0 * s.base.delays.back());
            const Trajectory nds = simulate_nds(s, w, u, cfg);
            const DDFSpec f = nds_to_ddf(s);
            const Trajectory ddf = simulate_ddf(f, Vector::Zero(2), zero_channels(f), w, u, cfg);
            const Trajectory dde = simulate_dde(s.base, HistoryFunction::zero(2, -s.base.delays.back()), w, u, cfg);
            CHECK(compare(ddf, dde).max_abs() <= 1e-8);
            CHECK(compare(nds, dde).max_abs() <= 1e-8);
        }
    }
    SECTION("nonzero neutral terms converge under refinement") {
        NDSSpec s = NDSSpec::zeros(2, 1, 0, 1, 0, {1.0});
        s.base.A0 = (Matrix(2, 2) << -1.0, 0.5, -0.3, -0.8).finished();
        s.base.B1 = (Matrix(2, 1) << 1.0, 0.5).finished();
        s.base.C10 = (Matrix(1, 2) << 1.0, -1.0).finished();
        s.base.delayed[0].A = (Matrix(2, 2) << 0.2, 0.0, 0.1, -0.4).finished();
        s.neutral[0].E = (Matrix(2, 2) << 0.3, 0.0, 0.1, -0.2).finished();
        s.neutral[0].E1 = (Matrix(1, 2) << 0.5, 0.7).finished();
        REQUIRE_FALSE(s.is_retarded());
        const auto w = SignalDescriptor::parse("poly:0,0,1", 1);
        const auto u = SignalDescriptor::zeros(0);
        std::vector<Trajectory> runs;
        for (double dt : {0.05, 0.025, 0.0125}) runs.push_back(simulate_nds(s, w, u, config(3.0, dt)));
        for (const char* sig : {"x", "z"}) {
            const double coarse = refinement_gap(runs[0], runs[1], sig);
            const double fine = refinement_gap(runs[1], runs[2], sig);
            INFO(sig << ": " << coarse << " -> " << fine);
            CHECK((fine < 1e-11 || coarse / fine >= 8.0));
        }
    }
}

TEST_CASE("ODE-PDE transport states", "[simulate][odepde]") {
    const DDFSpec f = build_shower_ddf(ShowerParams::defaults(1));
    const auto w = SignalDescriptor::parse("sin:1:3:0", 1);
    const auto u = SignalDescriptor::parse("sin:0.5:2:0", 1);
    const SimConfig cfg = config(3.0);
    const Trajectory ddf = simulate_ddf(f, Vector::Zero(2), zero_channels(f), w, u, cfg);
    const auto phi0 = ddf_to_odepde_history(zero_channels(f), f.delays);
    const Trajectory pde = simulate_odepde(ddf_to_odepde(f), Vector::Zero(2), phi0, w, u, cfg);
    CHECK(compare(pde, ddf).max_abs() == 0.0);

    const auto left = std::min_element(pde.nodes.begin(), pde.nodes.end()) - pde.nodes.begin();
    REQUIRE(pde.nodes[static_cast<std::size_t>(left)] == -1.0);
    const Index lag = static_cast<Index>(std::lround(f.delays[0] / cfg.dt));
    double worst = 0.0;
    for (Index k = lag; k < pde.samples(); ++k) {
        worst = std::max(worst, std::abs(pde.channels[0](left, k) - ddf.channels[0](0, k - lag)));
    }
    CHECK(worst <= 1e-10);

    SECTION("zero system stays at rest") {
        const DDFSpec z = DDFSpec::zeros(2, 1, 1, 1, 1, {0.5}, {2}, 2);
        const auto zeros = ddf_to_odepde_history(zero_channels(z), z.delays);
        const Trajectory tr = simulate_odepde(ddf_to_odepde(z), Vector::Zero(2), zeros, SignalDescriptor::zeros(1),
                                              SignalDescriptor::zeros(1), config(1.0));
        CHECK(tr.x.cwiseAbs().maxCoeff() == 0.0);
        CHECK(tr.channels[0].cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("PIE of the scalar delay equation", "[simulate][pie]") {
    const DDESpec d = negative_feedback();
    const PIESpec pie = dde_to_pie(d);
    const auto hist = HistoryFunction::constant(Vector::Ones(1), -1.0);
    const auto r0 = dde_channel_histories(d, hist);
    const auto empty = SignalDescriptor::zeros(0);
    std::vector<double> errors;
    for (std::size_t M : {16u, 24u}) {
        const Trajectory tr = simulate_pie(pie, pie_initial_state(pie, Vector::Ones(1), r0), empty, empty, config(2.0, 1e-3, M));
        errors.push_back(oracle_error(tr));
    }
    INFO("errors " << errors[0] << ", " << errors[1]);
    CHECK(errors[0] <= 1e-3);
    CHECK(errors[1] < errors[0]);
}

TEST_CASE("PIE converges spectrally on the shower network", "[simulate][pie][property]") {
    const DDFSpec f = build_shower_ddf(ShowerParams::defaults(2));
    const auto w = SignalDescriptor::parse("poly:0,0,1", 2);
    const auto u = SignalDescriptor::parse("poly:0,0,0.5", 2);
    const SimConfig base = config(3.0 * f.delays.back());
    const Trajectory ref = simulate_ddf(f, Vector::Zero(4), zero_channels(f), w, u, base);
    const PIESpec pie = ddf_to_pie(f);
    const HybridVector x0 = pie_initial_state(pie, Vector::Zero(4), zero_channels(f));
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t M : {8u, 12u, 16u, 24u}) {
        SimConfig cfg = base;
        cfg.order = M;
        const Trajectory tr = simulate_pie(pie, x0, w, u, cfg);
        // The outputs alone hit the trapezoid time-step floor once M >= 12; the state does not.
        const double err = compare(tr, ref, {"x", "y", "z"}).max_abs();
        INFO("M = " << M << ": " << err);
        CHECK(err < previous);
        if (M == 16) CHECK(compare(tr, ref, {"y", "z"}).max_abs() <= 1e-3);
        previous = err;
    }
}

TEST_CASE("feedback network recursion", "[simulate][sof]") {
    // n = N = 1: y(t) = x(t) + d21 w(t) + delta f y(t - tau).
    const double d21 = 0.4, delta = 0.6, f = -0.5, tau = 0.5;
    SofPlant plant;
    plant.delays = {tau};
    plant.A0 = scalar(-1.0);
    plant.B1 = scalar(1.0);
    plant.C1 = scalar(1.0);
    plant.D12 = scalar(0.2);
    plant.C2 = scalar(1.0);
    plant.D21 = scalar(d21);
    plant.B2 = {scalar(0.7)};
    plant.D22 = {scalar(delta)};
    const DDFSpec ddf = sof_network_to_ddf(plant, scalar(f));
    const auto w = SignalDescriptor::parse("sin:1:3:0", 1);
    const SimConfig cfg = config(2.0);
    const Trajectory tr = simulate_ddf(ddf, Vector::Zero(1), zero_channels(ddf), w, SignalDescriptor::zeros(1), cfg);
    const Index lag = static_cast<Index>(std::lround(tau / cfg.dt));
    double worst = 0.0;
    for (Index k = 0; k < tr.samples(); ++k) {
        const double past = k >= lag ? tr.y(0, k - lag) : 0.0;
        worst = std::max(worst, std::abs(tr.y(0, k) - (tr.x(0, k) + d21 * tr.w(0, k) + delta * f * past)));
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("linearity and causality", "[simulate][property]") {
    const ShowerParams params = ShowerParams::defaults(2);
    const DDESpec dde = build_shower_dde(params);
    const DDFSpec ddf = build_shower_ddf(params);
    const auto w = SignalDescriptor::parse("poly:0,0.5,1", 2);
    const auto u = SignalDescriptor::parse("sin:0.5:2:0", 2);
    const SimConfig cfg = config(4.0);
    SECTION("scaling the inputs scales the response") {
        for (double alpha : {-2.0, 0.3, 5.0}) {
            const auto ws = w.scaled(alpha), us = u.scaled(alpha);
            const auto h = HistoryFunction::zero(4, -2.0);
            CHECK(scaled_gap(simulate_dde(dde, h, w, u, cfg), simulate_dde(dde, h, ws, us, cfg), alpha) <= 1e-9);
            CHECK(scaled_gap(simulate_ddf(ddf, Vector::Zero(4), zero_channels(ddf), w, u, cfg),
                             simulate_ddf(ddf, Vector::Zero(4), zero_channels(ddf), ws, us, cfg), alpha) <= 1e-9);
            const PIESpec pie = ddf_to_pie(ddf);
            const HybridVector x0 = pie_initial_state(pie, Vector::Zero(4), zero_channels(ddf));
            SimConfig pcfg = cfg;
            pcfg.t_final = 1.0;
            CHECK(scaled_gap(simulate_pie(pie, x0, w, u, pcfg), simulate_pie(pie, x0, ws, us, pcfg), alpha) <= 1e-9);
        }
    }
    SECTION("inputs that start late give a silent prefix") {
        const auto late = SignalDescriptor::parse("step:1.5:1", 2);
        const auto none = SignalDescriptor::zeros(2);
        const Trajectory tr = simulate_dde(dde, HistoryFunction::zero(4, -2.0), late, none, cfg);
        for (Index k = 0; k < tr.samples() && tr.t[static_cast<std::size_t>(k)] < 1.5 - 1e-9; ++k) {
            CHECK(tr.x.col(k).cwiseAbs().maxCoeff() == 0.0);
            CHECK(tr.z.col(k).cwiseAbs().maxCoeff() == 0.0);
        }
        CHECK(tr.x.cwiseAbs().maxCoeff() > 0.0);
    }
}

TEST_CASE("trajectory comparison and configuration checks", "[simulate]") {
    const DDESpec d = negative_feedback();
    const auto hist = HistoryFunction::constant(Vector::Ones(1), -1.0);
    const auto empty = SignalDescriptor::zeros(0);
    const Trajectory a = simulate_dde(d, hist, empty, empty, config(1.0, 0.01));
    CHECK(compare(a, a, {"x"}).max_abs() == 0.0);

    const Trajectory b = simulate_dde(build_shower_dde(ShowerParams::defaults(1)), HistoryFunction::zero(2, -1.0),
                                      SignalDescriptor::zeros(1), SignalDescriptor::zeros(1), config(1.0, 0.01));
    CHECK_THROWS_AS(compare(a, b, {"x"}), DimensionError);

    Trajectory shifted = a;
    for (double& t : shifted.t) t += 10.0;
    CHECK_THROWS_AS(compare(a, shifted, {"x"}), DomainError);
    CHECK_THROWS_AS(compare(shifted, a, {"x"}), DomainError);

    SECTION("finer reference is resampled") {
        const Trajectory fine = simulate_dde(d, hist, empty, empty, config(1.0, 0.0025));
        CHECK(compare(a, fine, {"x"}).max_abs() <= 1e-8);
    }
    SECTION("step and integrator rules") {
        CHECK_THROWS_AS(simulate_dde(d, hist, empty, empty, config(1.0, 0.3)), ValidationError);
        CHECK_THROWS_AS(simulate_dde(d, hist, empty, empty, config(0.001, 0.01)), ValidationError);
        SimConfig bad = config(1.0);
        bad.integrator = Integrator::ImplicitTrapezoid;
        CHECK_THROWS_AS(simulate_dde(d, hist, empty, empty, bad), ValidationError);
        SimConfig explicit_pie = config(1.0);
        explicit_pie.integrator = Integrator::RK4Characteristics;
        const PIESpec pie = dde_to_pie(d);
        CHECK_THROWS_AS(simulate_pie(pie, pie_initial_state(pie, Vector::Ones(1), dde_channel_histories(d, hist)), empty,
                                     empty, explicit_pie),
                        ValidationError);
    }
    SECTION("results are reproducible") {
        const Trajectory again = simulate_dde(d, hist, empty, empty, config(1.0, 0.01));
        CHECK(again.x == a.x);
    }
}
