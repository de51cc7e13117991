#include "catch_amalgamated.hpp"

#include "delayrep/convert/dde_ddf.hpp"
#include "delayrep/convert/minimal.hpp"
#include "delayrep/core/validate.hpp"
#include "delayrep/models/shower.hpp"
#include "delayrep/models/uav.hpp"
#include "delayrep/simulate/simulate.hpp"

#include "support/oracles.hpp"

using namespace delayrep;

namespace {

Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

Matrix mat(Index rows, Index cols, std::initializer_list<double> values) {
    Matrix m(rows, cols);
    auto it = values.begin();
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) m(i, j) = *it++;
    }
    return m;
}

bool equal(const Matrix& a, const Matrix& b) { return a.rows() == b.rows() && a.cols() == b.cols() && a == b; }

/// One scalar UAV with unit gains and process, input and output delays 1, 2 and 3.
UAVParams scalar_uav() {
    UAVParams P;
    P.N = 1;
    P.n = P.m = P.p = P.r = 1;
    P.a = {scalar(-1)};
    P.coupling = {{Matrix::Zero(1, 1)}};
    P.b1 = {scalar(1)};
    P.b2 = {scalar(1)};
    P.c2 = {scalar(1)};
    P.d21 = {scalar(1)};
    P.C1 = scalar(1);
    P.D12 = scalar(0);
    P.process_delays = {1.0};
    P.input_delays = {2.0};
    P.output_delays = {3.0};
    return P;
}

std::vector<HistoryFunction> zero_channels(const DDFSpec& f) {
    std::vector<HistoryFunction> r0;
    for (std::size_t i = 0; i < f.channels.size(); ++i) {
        r0.push_back(HistoryFunction::zero(f.channels[i].Cr.rows(), -f.delays[i], static_cast<int>(i)));
    }
    return r0;
}

/// Largest (x, y, z) gap between the DDE and DDF forms under zero data and smooth inputs.
double builder_gap(const DDESpec& dde, const DDFSpec& ddf) {
    const double tmax = dde.delays.back();
    SimConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_final = 3.0 * tmax;
    const auto w = SignalDescriptor::parse("sin:1:3:0", dde.dims.m);
    const auto u = SignalDescriptor::parse("sin:0.5:2:0", dde.dims.p);
    const Trajectory a = simulate_dde(dde, HistoryFunction::zero(dde.dims.n, -tmax), w, u, cfg);
    const Trajectory b = simulate_ddf(ddf, Vector::Zero(dde.dims.n), zero_channels(ddf), w, u, cfg);
    return compare(b, a).max_abs();
}

}  // namespace

TEST_CASE("shower network matrices", "[models][shower]") {
    SECTION("one user") {
        const DDESpec d = build_shower_dde(ShowerParams::defaults(1));
        CHECK(equal(d.A0, mat(2, 2, {0, 1, 0, 0})));
        CHECK(equal(d.delayed[0].A, mat(2, 2, {0, 0, 0, -1})));
        CHECK(equal(d.B1, mat(2, 1, {-1, 1})));
        CHECK(equal(d.B2, mat(2, 1, {0, 1})));
        CHECK(equal(d.C10, mat(2, 2, {1, 0, 0, 0})));
        CHECK(equal(d.D12, mat(2, 1, {0, 0.1})));
        CHECK(d.delays == std::vector<double>{1.0});
    }
    SECTION("three users") {
        const ShowerParams p = ShowerParams::defaults(3);
        const Matrix G = p.Gamma();
        for (Index i = 0; i < 3; ++i) {
            for (Index j = 0; j < 3; ++j) CHECK(G(i, j) == (i == j ? -1.0 : 1.0 / 3.0));
        }
        const DDESpec d = build_shower_dde(p);
        CHECK(d.dims.n == 6);
        CHECK(d.dims.m == 3);
        CHECK(d.dims.p == 3);
        CHECK(d.dims.q == 2);
        CHECK(d.delays == std::vector<double>{1.0, 2.0, 3.0});
        for (std::size_t i = 0; i < 3; ++i) {
            Matrix expected = Matrix::Zero(6, 6);
            expected.block(3, 3 + static_cast<Index>(i), 3, 1) = G.col(static_cast<Index>(i));
            CHECK(equal(d.delayed[i].A, expected));
        }
        const DDFSpec f = build_shower_ddf(p);
        CHECK(f.dims.total_channel_dim() == 3);
        CHECK(f.D1v.cwiseAbs().maxCoeff() == 0.0);
        CHECK(equal(f.Bv.bottomRows(3), G));
    }
    SECTION("parameter checks") {
        ShowerParams p = ShowerParams::defaults(2);
        p.tau = {2.0, 1.0};
        CHECK_THROWS_AS(build_shower_dde(p), ValidationError);
        p = ShowerParams::defaults(2);
        p.alpha.pop_back();
        CHECK_THROWS_AS(build_shower_ddf(p), DimensionError);
        CHECK_THROWS_AS(ShowerParams::defaults(0), ValidationError);
    }
}

TEST_CASE("UAV fleet builders", "[models][uav]") {
    SECTION("scalar instance") {
        const UAVParams P = scalar_uav();
        const DDESpec d = build_uav_dde(P);
        REQUIRE(d.delays == std::vector<double>{1.0, 2.0, 3.0});
        CHECK(equal(d.A0, scalar(-1)));
        CHECK(equal(d.delayed[0].B1, scalar(1)));
        CHECK(equal(d.delayed[1].B2, scalar(1)));
        CHECK(equal(d.delayed[2].C2, scalar(1)));
        CHECK(equal(d.delayed[2].D21, scalar(1)));
        CHECK(d.delayed[0].A.cwiseAbs().maxCoeff() == 0.0);
        CHECK(d.delayed[1].B1.cwiseAbs().maxCoeff() == 0.0);

        const DDFSpec f = build_uav_ddf(P);
        REQUIRE(f.dims.p_i == std::vector<Index>{1, 1, 1});
        CHECK(equal(f.channels[2].Cr, scalar(1)));
        CHECK(equal(f.channels[2].Br1, scalar(1)));
        CHECK(equal(f.channels[0].Br1, scalar(1)));
        CHECK(equal(f.channels[1].Br2, scalar(1)));
        CHECK(validate(f).ok());
    }
    SECTION("uncoupled fleet has block-diagonal dynamics") {
        UAVParams P = UAVParams::example(3, 2, 1, 1, 1, 9);
        for (auto& row : P.coupling) {
            for (auto& block : row) block.setZero();
        }
        const Matrix A = build_uav_dde(P).A0;
        for (Index i = 0; i < 3; ++i) {
            for (Index j = 0; j < 3; ++j) {
                if (i != j) CHECK(A.block(2 * i, 2 * j, 2, 2).cwiseAbs().maxCoeff() == 0.0);
            }
        }
    }
    SECTION("channel accounting") {
        oracle::Random rng(13);
        for (int trial = 0; trial < 20; ++trial) {
            const Index N = rng.integer(1, 5), n = rng.integer(1, 3), r = rng.integer(1, 3);
            const Index m = rng.integer(1, 3), p = rng.integer(1, 3);
            const UAVParams P = UAVParams::example(N, n, m, p, r, static_cast<std::uint32_t>(trial + 1));
            INFO("N=" << N << " n=" << n << " m=" << m << " p=" << p << " r=" << r);
            CHECK(build_uav_ddf(P).dims.total_channel_dim() == (2 * n + r) * N);
            const DDFSpec naive = dde_to_ddf(build_uav_dde(P));
            CHECK(naive.K() == 3 * N);
            for (Index pi : naive.dims.p_i) CHECK(pi == n * N + m + p);
            CHECK(naive.dims.total_channel_dim() == 3 * N * (n * N + m + p));
        }
    }
    SECTION("colliding delays share one index") {
        UAVParams P = scalar_uav();
        P.input_delays = {1.0};
        const DDESpec d = build_uav_dde(P);
        REQUIRE(d.delays == std::vector<double>{1.0, 3.0});
        CHECK(equal(d.delayed[0].B1, scalar(1)));
        CHECK(equal(d.delayed[0].B2, scalar(1)));
        const DDFSpec f = build_uav_ddf(P);
        CHECK(f.dims.p_i == std::vector<Index>{2, 1});
        CHECK_FALSE(f.provenance.empty());
        CHECK(builder_gap(d, f) <= 1e-8);
    }
    SECTION("invalid parameters") {
        UAVParams P = scalar_uav();
        P.output_delays = {-1.0};
        CHECK_THROWS_AS(build_uav_dde(P), ValidationError);
        P = scalar_uav();
        P.b1 = {Matrix::Zero(2, 1)};
        CHECK_THROWS_AS(build_uav_ddf(P), DimensionError);
    }
}

TEST_CASE("builder pairs simulate alike", "[models][property]") {
    for (Index N = 1; N <= 3; ++N) {
        const ShowerParams p = ShowerParams::defaults(N);
        INFO("shower N = " << N);
        CHECK(builder_gap(build_shower_dde(p), build_shower_ddf(p)) <= 1e-8);
    }
    for (std::uint32_t seed : {3u, 4u}) {
        const UAVParams P = UAVParams::example(2, 2, 1, 1, 1, seed);
        INFO("uav seed " << seed);
        CHECK(builder_gap(build_uav_dde(P), build_uav_ddf(P)) <= 1e-8);
    }
    SECTION("nonzero shower history") {
        const ShowerParams p = ShowerParams::defaults(2);
        const DDESpec dde = build_shower_dde(p);
        const DDFSpec ddf = build_shower_ddf(p);
        const auto hist = HistoryFunction::sample(
            [](double s) { return Vector((Vector(4) << 0.2, -0.1, std::cos(s), std::sin(2 * s)).finished()); }, 4, -2.0, 257);
        // r_i = T_2i, so its history is the matching row of x0 on [-tau_i, 0].
        std::vector<HistoryFunction> r0;
        for (std::size_t i = 0; i < 2; ++i) {
            const auto part = hist.restricted(-ddf.delays[i]);
            Matrix row = part.values().row(2 + static_cast<Index>(i));
            r0.emplace_back(part.grid(), row, static_cast<int>(i));
        }
        SimConfig cfg;
        cfg.t_final = 6.0;
        const auto w = SignalDescriptor::parse("const:2", 2);
        const auto u = SignalDescriptor::parse("sin:0.5:2:0", 2);
        const Trajectory a = simulate_dde(dde, hist, w, u, cfg);
        const Trajectory b = simulate_ddf(ddf, hist(0.0), r0, w, u, cfg);
        CHECK(compare(b, a).max_abs() <= 1e-8);
    }
}

TEST_CASE("rank-one recovery of the shower channels", "[models][minimal]") {
    for (Index N = 1; N <= 10; ++N) {
        CHECK(minimal_ddf_from_dde(build_shower_dde(ShowerParams::defaults(N))).dims.total_channel_dim() == N);
    }
}

TEST_CASE("feedback network builder", "[models][sof]") {
    UAVParams P = UAVParams::example(3, 1, 1, 1, 1, 5);
    const Index rN = P.r * P.N;
    SECTION("zero gain is the open loop") {
        const DDFSpec f = build_sof_network(P, Matrix::Zero(P.p, rN));
        const SofPlant plant = uav_sof_plant(P);
        CHECK(equal(f.C1, plant.C1));
        for (const auto& ch : f.channels) CHECK(ch.Cr.cwiseAbs().maxCoeff() == 0.0);
    }
    SECTION("no actuator-to-sensor term means no recursion") {
        for (auto& d : P.d22) d.setZero();
        const DDFSpec f = build_sof_network(P, Matrix::Constant(P.p, rN, -0.3));
        for (const auto& ch : f.channels) CHECK(ch.Drv.cwiseAbs().maxCoeff() == 0.0);
    }
    SECTION("gain shape is checked") {
        CHECK_THROWS_AS(build_sof_network(P, Matrix::Zero(P.p + 1, rN)), DimensionError);
    }
}
