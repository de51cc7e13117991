#include "catch_amalgamated.hpp"

#include "delayrep/core/quadrature.hpp"
#include "delayrep/piops/discretize.hpp"
#include "delayrep/piops/pi_operator.hpp"

#include "support/oracles.hpp"

using namespace delayrep;
using Catch::Matchers::WithinAbs;

namespace {

Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

PIOperator scalar_op() { return PIOperator::zero(1, 1, 1, 1); }

PolyKernel constant2(double v) { return PolyKernel::constant(scalar(v), 2); }

/// Random polynomial hybrid vector, returned as both library and oracle objects.
struct Sample {
    HybridVector lib;
    oracle::Hybrid ref;
};

Sample random_vector(oracle::Random& rng, Index n, Index p, int degree) {
    const Vector x = rng.matrix(n, 1, 1.0);
    const PolyKernel f = rng.kernel1(p, 1, degree, 1.0);
    return {HybridVector::polynomial(x, f), {x, p, [f](double s) { return Vector(oracle::eval1(f, s)); }}};
}

double deviation(const HybridVector& got, const oracle::Hybrid& ref) {
    double err = got.x().size() ? (got.x() - ref.x).cwiseAbs().maxCoeff() : 0.0;
    for (double s : {-1.0, -0.83, -0.5, -0.31, -0.07, 0.0}) {
        if (ref.p > 0) err = std::max(err, (got.f(s) - ref.f(s)).cwiseAbs().maxCoeff());
    }
    return err;
}

double deviation(const HybridVector& a, const HybridVector& b) {
    oracle::Hybrid ref{b.x(), b.p(), [b](double s) { return b.f(s); }};
    return deviation(a, ref);
}

}  // namespace

TEST_CASE("apply on hand-checked operators", "[piops][apply]") {
    SECTION("identity") {
        oracle::Random rng(1);
        const auto v = random_vector(rng, 2, 3, 2);
        CHECK(deviation(apply(PIOperator::identity(2, 3), v.lib), v.ref) <= 1e-15);
    }
    SECTION("Q1 = 1 on phi = 1") {
        PIOperator op = scalar_op();
        op.Q1 = PolyKernel::constant(scalar(1.0));
        const auto out = apply(op, HybridVector::polynomial(Vector::Zero(1), PolyKernel::constant(scalar(1.0))));
        CHECK_THAT(out.x()(0), WithinAbs(1.0, 1e-15));
    }
    SECTION("R1 = 1 on phi = 1 gives s + 1") {
        PIOperator op = scalar_op();
        op.R1 = constant2(1.0);
        const auto out = apply(op, HybridVector::polynomial(Vector::Zero(1), PolyKernel::constant(scalar(1.0))));
        for (double s : {-1.0, -0.6, -0.25, 0.0}) {
            const double quad = oracle::integrate([](double) { return 1.0; }, -1.0, s, 10);
            CHECK_THAT(out.f(s)(0), WithinAbs(s + 1.0, 1e-14));
            CHECK_THAT(out.f(s)(0), WithinAbs(quad, 1e-14));
        }
    }
    SECTION("non-polynomial inputs use quadrature") {
        PIOperator op = scalar_op();
        op.Q1 = PolyKernel::constant(scalar(1.0));
        op.R2 = constant2(1.0);
        const auto v = HybridVector::function(Vector::Zero(1), 1, [](double s) { return Vector::Constant(1, std::exp(s)); });
        const auto out = apply(op, v);
        CHECK_THAT(out.x()(0), WithinAbs(1.0 - std::exp(-1.0), 1e-12));
        CHECK_THAT(out.f(-0.5)(0), WithinAbs(1.0 - std::exp(-0.5), 1e-12));
    }
    SECTION("dimension mismatch") {
        oracle::Random rng(2);
        const auto v = random_vector(rng, 2, 2, 1);
        CHECK_THROWS_AS(apply(PIOperator::identity(1, 2), v.lib), DimensionError);
    }
}

TEST_CASE("operator algebra matches pointwise arithmetic", "[piops][algebra][property]") {
    oracle::Random rng(2024);
    double worst_add = 0.0, worst_scale = 0.0, worst_compose = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Index n0 = rng.integer(0, 2), n1 = rng.integer(0, 2), n2 = rng.integer(0, 2);
        const Index p0 = rng.integer(1, 2), p1 = rng.integer(1, 2), p2 = rng.integer(1, 2);
        const PIOperator a = rng.pi_operator(n2, n1, p2, p1, rng.integer(0, 2));
        const PIOperator a2 = rng.pi_operator(n2, n1, p2, p1, rng.integer(0, 2));
        const PIOperator b = rng.pi_operator(n1, n0, p1, p0, rng.integer(0, 2));
        const auto v = random_vector(rng, n0, p0, rng.integer(0, 2));
        const auto w = random_vector(rng, n1, p1, rng.integer(0, 2));
        const double alpha = rng.uniform(-2.0, 2.0);

        const auto ra = oracle::apply(a, w.ref);
        const auto ra2 = oracle::apply(a2, w.ref);
        oracle::Hybrid sum{ra.x + ra2.x, ra.p, [ra, ra2](double s) { return Vector(ra.f(s) + ra2.f(s)); }};
        worst_add = std::max(worst_add, deviation(apply(add(a, a2), w.lib), sum));

        oracle::Hybrid scaled{alpha * ra.x, ra.p, [ra, alpha](double s) { return Vector(alpha * ra.f(s)); }};
        worst_scale = std::max(worst_scale, deviation(apply(scale(a, alpha), w.lib), scaled));

        const auto nested = oracle::apply(a, oracle::apply(b, v.ref));
        worst_compose = std::max(worst_compose, deviation(apply(compose(a, b), v.lib), nested));
    }
    CHECK(worst_add <= 1e-10);
    CHECK(worst_scale <= 1e-10);
    CHECK(worst_compose <= 1e-10);
}

TEST_CASE("composition is associative", "[piops][algebra][property]") {
    oracle::Random rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        const PIOperator a = rng.pi_operator(1, 2, 1, 1, rng.integer(0, 1));
        const PIOperator b = rng.pi_operator(2, 1, 1, 2, rng.integer(0, 1));
        const PIOperator c = rng.pi_operator(1, 1, 2, 1, rng.integer(0, 1));
        const auto v = random_vector(rng, 1, 1, 2);
        const auto left = apply(compose(compose(a, b), c), v.lib);
        const auto right = apply(compose(a, compose(b, c)), v.lib);
        CHECK(deviation(left, right) <= 1e-9);
    }
}

TEST_CASE("algebra identities", "[piops][algebra]") {
    oracle::Random rng(4);
    const PIOperator op = rng.pi_operator(2, 2, 1, 1, 2);
    const PIOperator zero = PIOperator::zero(2, 2, 1, 1);
    const auto v = random_vector(rng, 2, 1, 2);
    CHECK(deviation(apply(add(op, zero), v.lib), apply(op, v.lib)) <= 1e-14);
    CHECK(deviation(apply(scale(op, 0.0), v.lib), apply(zero, v.lib)) == 0.0);
    const auto twice = apply(add(PIOperator::identity(2, 1), PIOperator::identity(2, 1)), v.lib);
    oracle::Hybrid doubled{2.0 * v.ref.x, 1, [f = v.ref.f](double s) { return Vector(2.0 * f(s)); }};
    CHECK(deviation(twice, doubled) <= 1e-15);
    CHECK(deviation(apply(compose(PIOperator::identity(2, 1), op), v.lib), apply(op, v.lib)) <= 1e-13);
    CHECK(deviation(apply(compose(op, zero), v.lib), apply(zero, v.lib)) <= 1e-15);
    CHECK_THROWS_AS(add(op, PIOperator::zero(1, 2, 1, 1)), DimensionError);
    CHECK_THROWS_AS(compose(op, PIOperator::zero(3, 2, 1, 1)), DimensionError);
}

TEST_CASE("composition refuses to exceed the degree cap", "[piops][algebra]") {
    oracle::Random rng(6);
    const PIOperator a = rng.pi_operator(1, 1, 1, 1, 5);
    const PIOperator b = rng.pi_operator(1, 1, 1, 1, 5);
    CHECK_THROWS_AS(compose(a, b), DegreeOverflow);
    CHECK_NOTHROW(compose(a, b, 16));
}

TEST_CASE("discretization", "[piops][discretize]") {
    SECTION("identity") {
        const Matrix D = discretize(PIOperator::identity(2, 3), 7);
        CHECK(D.rows() == 2 + 3 * 7);
        CHECK((D - Matrix::Identity(D.rows(), D.cols())).cwiseAbs().maxCoeff() <= 1e-15);
    }
    SECTION("Q1 = 1 on phi = 1") {
        PIOperator op = scalar_op();
        op.Q1 = PolyKernel::constant(scalar(1.0));
        const auto v = HybridVector::polynomial(Vector::Zero(1), PolyKernel::constant(scalar(1.0)));
        const Vector out = discretize(op, 8) * sample(v, 8);
        CHECK_THAT(out(0), WithinAbs(1.0, 1e-12));
    }
    SECTION("R1 = 1 on phi = 1") {
        PIOperator op = scalar_op();
        op.R1 = constant2(1.0);
        const auto v = HybridVector::polynomial(Vector::Zero(1), PolyKernel::constant(scalar(1.0)));
        const Vector out = discretize(op, 8) * sample(v, 8);
        const auto nodes = quad::cgl_nodes(8);
        for (std::size_t j = 0; j < 8; ++j) CHECK_THAT(out(node_index(1, 0, j, 8)), WithinAbs(nodes[j] + 1.0, 1e-12));
    }
    SECTION("order too small for the kernels") {
        oracle::Random rng(3);
        CHECK_THROWS_AS(discretize(rng.pi_operator(1, 1, 1, 1, 4), 5), DimensionError);
        CHECK_THROWS_AS(discretize(PIOperator::identity(1, 1), 1), DimensionError);
    }
}

TEST_CASE("discretization is exact beyond the total degree", "[piops][discretize][property]") {
    oracle::Random rng(99);
    double worst = 0.0;
    for (int trial = 0; trial < 40; ++trial) {
        const int kdeg = rng.integer(0, 2), fdeg = rng.integer(0, 2);
        const PIOperator op = rng.pi_operator(rng.integer(0, 2), rng.integer(0, 2), rng.integer(1, 2), rng.integer(1, 2), kdeg);
        const auto v = random_vector(rng, op.n_in, op.p_in, fdeg);
        const auto ref = oracle::apply(op, v.ref);
        const std::size_t M = static_cast<std::size_t>(2 * kdeg + fdeg + 2);
        for (std::size_t order : {M, M + 3}) {
            const Vector got = discretize(op, order) * sample(v.lib, order);
            const auto nodes = quad::cgl_nodes(order);
            for (Index i = 0; i < op.n_out; ++i) worst = std::max(worst, std::abs(got(i) - ref.x(i)));
            for (std::size_t j = 0; j < order; ++j) {
                const Vector f = ref.f(nodes[j]);
                for (Index c = 0; c < op.p_out; ++c) {
                    worst = std::max(worst, std::abs(got(node_index(op.n_out, c, j, order)) - f(c)));
                }
            }
        }
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("discretization converges for smooth inputs", "[piops][discretize][property]") {
    oracle::Random rng(12);
    const PIOperator op = rng.pi_operator(1, 1, 1, 1, 2);
    const auto v = HybridVector::function(Vector::Constant(1, 0.5), 1, [](double s) { return Vector::Constant(1, std::cos(3.0 * s)); });
    oracle::Hybrid vr{Vector::Constant(1, 0.5), 1, [](double s) { return Vector::Constant(1, std::cos(3.0 * s)); }};
    const auto ref = oracle::apply(op, vr, 24);
    double previous = INFINITY;
    for (std::size_t M : {6, 10, 14, 18}) {
        const Vector got = discretize(op, M) * sample(v, M);
        const auto nodes = quad::cgl_nodes(M);
        double err = std::abs(got(0) - ref.x(0));
        for (std::size_t j = 0; j < M; ++j) err = std::max(err, std::abs(got(node_index(1, 0, j, M)) - ref.f(nodes[j])(0)));
        CHECK(err < previous);
        previous = err;
    }
    CHECK(previous <= 1e-10);
}

TEST_CASE("Clenshaw-Curtis weights integrate polynomials", "[piops][quadrature]") {
    for (std::size_t M : {2, 5, 9, 16}) {
        const auto nodes = quad::cgl_nodes(M);
        const auto w = quad::clenshaw_curtis_weights(M);
        CHECK(nodes.front() == -1.0);
        CHECK(nodes.back() == 0.0);
        for (std::size_t k = 0; k < M; ++k) {
            double acc = 0.0;
            for (std::size_t j = 0; j < M; ++j) acc += w[j] * std::pow(nodes[j], static_cast<double>(k));
            const double exact = (k % 2 == 0 ? 1.0 : -1.0) / static_cast<double>(k + 1);
            CHECK_THAT(acc, WithinAbs(exact, 1e-13));
        }
    }
}
