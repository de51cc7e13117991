#include "catch_amalgamated.hpp"

#include "delayrep/convert/dde_ddf.hpp"
#include "delayrep/core/history.hpp"
#include "delayrep/core/poly_kernel.hpp"
#include "delayrep/core/sewing.hpp"
#include "delayrep/core/signal.hpp"
#include "delayrep/core/validate.hpp"
#include "delayrep/models/shower.hpp"

#include "support/oracles.hpp"

using namespace delayrep;
using Catch::Matchers::WithinAbs;

namespace {

bool mentions(const ValidationReport& rep, const std::string& needle) {
    for (const auto& v : rep.violations) {
        if (v.message.find(needle) != std::string::npos || v.item.find(needle) != std::string::npos) return true;
    }
    return false;
}

Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

/// n = 1, K = 1, C_r1 = 1: r_1 carries x with no algebraic feedback.
DDFSpec scalar_ddf() {
    DDFSpec f = DDFSpec::zeros(1, 0, 0, 0, 0, {1.0}, {1}, 1);
    f.A0 = scalar(-1.0);
    f.Bv = scalar(0.5);
    f.channels[0].Cr = scalar(1.0);
    f.channels[0].Cv = scalar(1.0);
    return f;
}

}  // namespace

TEST_CASE("kernel evaluation", "[core][kernel]") {
    SECTION("zero kernel") {
        const auto k = PolyKernel::zero(2, 3);
        CHECK(eval_kernel(k, -0.3).isZero(0.0));
        CHECK(eval_kernel(k, -0.3).rows() == 2);
        CHECK(eval_kernel(k, -0.3).cols() == 3);
    }
    SECTION("1 + 2 s at s = -0.5") {
        const auto k = PolyKernel::univariate({scalar(1.0), scalar(2.0)});
        CHECK_THAT(eval_kernel(k, -0.5)(0, 0), WithinAbs(0.0, 1e-15));
    }
    SECTION("s theta at (-1, -1)") {
        std::vector<Matrix> c(4, scalar(0.0));
        c[1 * 2 + 1] = scalar(1.0);
        const auto k = PolyKernel::bivariate(1, c);
        CHECK_THAT(eval_kernel(k, -1.0, -1.0)(0, 0), WithinAbs(1.0, 1e-15));
    }
    SECTION("domain is enforced") {
        const auto k = PolyKernel::zero(1, 1, 1, -2.0);
        CHECK_NOTHROW(k(-2.0));
        CHECK_THROWS_AS(k(-2.1), DomainError);
        CHECK_THROWS_AS(k(0.1), DomainError);
    }
    SECTION("coefficient count must match the degree") {
        CHECK_THROWS(PolyKernel::bivariate(2, std::vector<Matrix>(5, scalar(1.0))));
    }
}

TEST_CASE("kernel evaluation is linear in the coefficients", "[core][kernel][property]") {
    oracle::Random rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int deg = rng.integer(0, 4);
        const auto k1 = rng.kernel1(2, 3, deg, 1.0);
        const auto k2 = rng.kernel1(2, 3, rng.integer(0, 4), 1.0);
        const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2), s = rng.uniform(-1, 0);
        const Matrix lhs = eval_kernel(a * k1 + b * k2, s);
        const Matrix rhs = a * eval_kernel(k1, s) + b * eval_kernel(k2, s);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-14);
        CHECK((eval_kernel(k1, s) - oracle::eval1(k1, s)).cwiseAbs().maxCoeff() <= 1e-13);
    }
    for (int trial = 0; trial < 20; ++trial) {
        const auto k = rng.kernel2(2, 2, rng.integer(0, 3), 1.0);
        const double s = rng.uniform(-1, 0), t = rng.uniform(-1, 0);
        CHECK((eval_kernel(k, s, t) - oracle::eval2(k, s, t)).cwiseAbs().maxCoeff() <= 1e-13);
    }
}

TEST_CASE("kernel calculus", "[core][kernel]") {
    oracle::Random rng(5);
    const auto k = rng.kernel1(2, 2, 3, 1.0, -2.0);
    SECTION("definite integral against quadrature") {
        const Matrix exact = k.integral(-2.0, -0.5);
        Matrix num = Matrix::Zero(2, 2);
        const auto rule = oracle::gauss(8, -2.0, -0.5);
        for (std::size_t i = 0; i < 8; ++i) num += rule.w[i] * oracle::eval1(k, rule.x[i]);
        CHECK((exact - num).cwiseAbs().maxCoeff() <= 1e-13);
    }
    SECTION("antiderivative and derivative") {
        const auto a = k.antiderivative_from(-2.0);
        CHECK(a(-2.0).isZero(1e-14));
        CHECK((a(-0.7) - k.integral(-2.0, -0.7)).cwiseAbs().maxCoeff() <= 1e-13);
        CHECK((a.derivative()(-1.3) - k(-1.3)).cwiseAbs().maxCoeff() <= 1e-13);
    }
    SECTION("rescaling") {
        const auto r = k.rescaled(2.0);
        CHECK(r.lower() == -1.0);
        CHECK((r(-0.4) - k(-0.8)).cwiseAbs().maxCoeff() <= 1e-14);
    }
}

TEST_CASE("signal descriptors", "[core][signal]") {
    SECTION("grammar") {
        const auto s = SignalDescriptor::parse("sin:2:3:0.5", 2);
        REQUIRE(s.dim() == 2);
        CHECK_THAT(s.value(0.4)(1), WithinAbs(2.0 * std::sin(3.0 * 0.4 + 0.5), 1e-15));
        CHECK_THAT(s.derivative(0.4)(0), WithinAbs(6.0 * std::cos(3.0 * 0.4 + 0.5), 1e-14));
        CHECK(s.value(-0.1).isZero(0.0));
        CHECK_THAT(SignalDescriptor::parse("poly:1,0,2", 1).value(2.0)(0), WithinAbs(9.0, 1e-15));
        CHECK_THAT(SignalDescriptor::parse("const:4", 1).value(7.0)(0), WithinAbs(4.0, 0.0));
        const auto st = SignalDescriptor::parse("step:1:3", 1);
        CHECK(st.value(0.5)(0) == 0.0);
        CHECK(st.value(1.5)(0) == 3.0);
        CHECK_FALSE(st.differentiable());
        const auto mixed = SignalDescriptor::parse("zero;const:2", 2);
        CHECK(mixed.value(1.0)(0) == 0.0);
        CHECK(mixed.value(1.0)(1) == 2.0);
    }
    SECTION("malformed descriptors") {
        CHECK_THROWS_AS(SignalDescriptor::parse("sin:1", 1), ValidationError);
        CHECK_THROWS_AS(SignalDescriptor::parse("square:1", 1), ValidationError);
        CHECK_THROWS_AS(SignalDescriptor::parse("const:x", 1), ValidationError);
        CHECK_THROWS_AS(SignalDescriptor::parse("zero;zero;zero", 2), ValidationError);
    }
    SECTION("smoothness rules follow the delayed blocks") {
        DDESpec d = DDESpec::zeros(1, 1, 1, 0, 0, {1.0});
        CHECK_FALSE(input_requirements(d).w_smooth);
        d.delayed[0].B1 = scalar(1.0);
        const auto req = input_requirements(d);
        CHECK(req.w_smooth);
        CHECK_FALSE(req.u_smooth);
        const auto ok = SignalDescriptor::parse("sin:1:1:0", 1);
        const auto bad = SignalDescriptor::parse("const:1", 1);
        CHECK(validate_inputs(req, 1, 1, ok, bad).ok());
        CHECK_FALSE(validate_inputs(req, 1, 1, bad, ok).ok());
        CHECK_FALSE(validate_inputs(req, 1, 1, SignalDescriptor::parse("step:0.5:1", 1), ok).ok());
    }
}

TEST_CASE("history functions", "[core][history]") {
    const auto cubic = [](double s) { return Vector::Constant(1, 1.0 + s - 2.0 * s * s + 0.5 * s * s * s); };
    const auto h = HistoryFunction::sample(cubic, 1, -2.0, 9);
    CHECK_THAT(h(-1.37)(0), WithinAbs(cubic(-1.37)(0), 1e-13));
    CHECK_THAT(h.derivative(-0.2)(0), WithinAbs(1.0 + 0.8 + 1.5 * 0.04, 1e-12));
    CHECK_THROWS_AS(h(-2.5), DomainError);
    SECTION("restriction and rescaling") {
        const auto r = h.restricted(-1.0);
        CHECK(r.lower() == -1.0);
        CHECK_THAT(r(-0.3)(0), WithinAbs(cubic(-0.3)(0), 1e-13));
        const auto c = h.compressed(2.0);
        CHECK(c.lower() == -1.0);
        CHECK_THAT(c(-0.25)(0), WithinAbs(cubic(-0.5)(0), 1e-13));
        CHECK_THAT(c.stretched(2.0)(-0.5)(0), WithinAbs(cubic(-0.5)(0), 1e-13));
    }
    SECTION("moments are exact for cubic data") {
        const double exact = oracle::integrate([&](double s) { return s * cubic(s)(0); }, -2.0, 0.0);
        CHECK_THAT(h.moment(1)(0), WithinAbs(exact, 1e-13));
    }
    SECTION("grid invariants") {
        CHECK_THROWS_AS(HistoryFunction({-1.0, -1.0, 0.0}, Matrix::Zero(1, 3)), ValidationError);
        CHECK_THROWS_AS(HistoryFunction({-1.0, -0.5}, Matrix::Zero(1, 2)), ValidationError);
        CHECK_THROWS_AS(HistoryFunction({-1.0, 0.0}, Matrix::Zero(1, 3)), DimensionError);
        Matrix bad = Matrix::Zero(1, 2);
        bad(0, 0) = NAN;
        CHECK_THROWS_AS(HistoryFunction({-1.0, 0.0}, bad), ValidationError);
    }
}

TEST_CASE("spec validation", "[core][validate]") {
    SECTION("shower model is well formed") {
        CHECK(validate(build_shower_dde(ShowerParams::defaults(3))).ok());
        CHECK(validate(build_shower_ddf(ShowerParams::defaults(3))).ok());
    }
    SECTION("equal delays are rejected") {
        CHECK(mentions(validate(DDESpec::zeros(1, 1, 1, 1, 1, {1.0, 1.0})), "not strictly increasing"));
        CHECK(mentions(validate(DDESpec::zeros(1, 1, 1, 1, 1, {-1.0})), "positive"));
    }
    SECTION("shape mismatches name the matrix") {
        DDESpec d = DDESpec::zeros(2, 1, 1, 1, 1, {1.0});
        d.delayed[0].B1 = Matrix::Zero(2, 2);
        const auto rep = validate(d);
        REQUIRE_FALSE(rep.ok());
        CHECK(rep.violations.front().item.find("B1") != std::string::npos);
    }
    SECTION("a singular algebraic loop is reported") {
        // One channel, C_v1 = 1 and D_rv1 = 1, so I - Chat_v1 D_rv1 = 0.
        DDFSpec f = DDFSpec::zeros(1, 0, 0, 0, 0, {1.0}, {1}, 1);
        f.channels[0].Cv = scalar(1.0);
        f.channels[0].Drv = scalar(1.0);
        CHECK(mentions(validate(f), "D_I singular"));
        f.channels[0].Drv = scalar(0.5);
        CHECK(validate(f).ok());
    }
    SECTION("neutral blocks") {
        NDSSpec s = NDSSpec::zeros(2, 1, 1, 1, 1, {0.5});
        CHECK(validate(s).ok());
        s.neutral[0].E1 = Matrix::Zero(2, 2);
        CHECK_FALSE(validate(s).ok());
    }
    SECTION("p_i must list one dim per delay") {
        DDFSpec f = scalar_ddf();
        f.dims.p_i.push_back(1);
        CHECK_FALSE(validate(f).ok());
    }
}

TEST_CASE("random valid specs conform everywhere", "[core][validate][property]") {
    oracle::Random rng(3);
    for (int trial = 0; trial < 25; ++trial) {
        const DDESpec d = rng.dde(rng.integer(1, 3), rng.integer(0, 2), rng.integer(0, 2), rng.integer(0, 2),
                                  rng.integer(0, 2), static_cast<std::size_t>(rng.integer(0, 2)));
        REQUIRE(validate(d).ok());
        const DDFSpec f = dde_to_ddf(d);
        CHECK(validate(f).ok());
        for (std::size_t i = 0; i < d.delays.size(); ++i) {
            CHECK_NOTHROW(d.stacked(i));
            CHECK_NOTHROW(d.stacked_kernel(i));
            CHECK_NOTHROW(f.c_hat(i));
        }
        CHECK_NOTHROW(f.loop_matrix());
    }
}

TEST_CASE("sewing conditions", "[core][sewing]") {
    SECTION("DDE-derived channels with constant x0") {
        oracle::Random rng(8);
        const DDESpec d = rng.dde(2, 1, 1, 1, 1, 2);
        const Vector x0 = Vector::Constant(2, 0.7);
        const auto hist = HistoryFunction::constant(x0, -d.delays.back());
        const auto residuals = check_sewing_ddf(dde_to_ddf(d), x0, dde_channel_histories(d, hist));
        CHECK(max_residual(residuals) <= 1e-12);
    }
    SECTION("polynomial histories by the same recipe") {
        oracle::Random rng(9);
        const DDESpec d = rng.dde(2, 1, 0, 1, 0, 2);
        const auto hist = HistoryFunction::sample(
            [](double s) { return Vector((Vector(2) << 1.0 + s * s, s - s * s * s).finished()); }, 2,
            -d.delays.back(), 33);
        CHECK(max_residual(check_sewing_ddf(dde_to_ddf(d), hist(0.0), dde_channel_histories(d, hist))) <= 1e-12);
    }
    SECTION("zero data") {
        const DDFSpec f = scalar_ddf();
        const auto r0 = std::vector<HistoryFunction>{HistoryFunction::zero(1, -1.0)};
        CHECK(max_residual(check_sewing_ddf(f, Vector::Zero(1), r0)) == 0.0);
        const auto phi0 = std::vector<HistoryFunction>{HistoryFunction::zero(1, -1.0)};
        CHECK(max_residual(check_sewing_odepde(ODEPDESpec{f}, Vector::Zero(1), phi0)) == 0.0);
    }
    SECTION("scalar residuals") {
        const DDFSpec f = scalar_ddf();
        const auto r0 = std::vector<HistoryFunction>{HistoryFunction::constant(Vector::Constant(1, 3.0), -1.0)};
        const auto res = check_sewing_ddf(f, Vector::Constant(1, 2.0), r0);
        REQUIRE(res.size() == 1);
        CHECK_THAT(res[0](0), WithinAbs(1.0, 1e-14));
        const auto phi0 = std::vector<HistoryFunction>{HistoryFunction::zero(1, -1.0)};
        CHECK_THAT(check_sewing_odepde(ODEPDESpec{f}, Vector::Constant(1, 1.0), phi0)[0](0), WithinAbs(-1.0, 1e-14));
    }
    SECTION("ODE-PDE histories from a sewn DDF history") {
        DDFSpec f = scalar_ddf();
        f.channels[0].Drv = scalar(0.5);
        f.channels[0].Cvd = PolyKernel::univariate({scalar(0.3), scalar(0.2)}, -1.0);
        // r0(s) = c + s  with c fixed by the sewing condition at x0 = 1.
        const double moment0 = 0.3 * 1.0 - 0.2 * 0.5;  // int_{-1}^0 (0.3 + 0.2 s) ds
        const double moment1 = 0.3 * -0.5 + 0.2 / 3.0;  // int_{-1}^0 (0.3 + 0.2 s) s ds
        // c = 1 + 0.5 ((c - 1) + c moment0 + moment1), solved for c
        const double c = (1.0 - 0.5 + 0.5 * moment1) / (1.0 - 0.5 - 0.5 * moment0);
        const auto r0 = std::vector<HistoryFunction>{
            HistoryFunction::sample([&](double s) { return Vector::Constant(1, c + s); }, 1, -1.0, 5)};
        CHECK(max_residual(check_sewing_ddf(f, Vector::Constant(1, 1.0), r0)) <= 1e-13);
        const auto phi0 = ddf_to_odepde_history(r0, f.delays);
        CHECK(max_residual(check_sewing_odepde(ODEPDESpec{f}, Vector::Constant(1, 1.0), phi0)) <= 1e-13);
    }
    SECTION("dimension mismatch") {
        const DDFSpec f = scalar_ddf();
        CHECK_THROWS_AS(check_sewing_ddf(f, Vector::Zero(2), {HistoryFunction::zero(1, -1.0)}), DimensionError);
    }
}
