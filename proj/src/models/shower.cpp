#include "delayrep/models/shower.hpp"

#include "delayrep/core/validate.hpp"

#include <string>
#include <type_traits>

namespace delayrep {

ShowerParams ShowerParams::defaults(Index N) {
    if (N < 1) throw ValidationError("shower model needs N >= 1 users");
    ShowerParams p;
    p.N = N;
    p.alpha.assign(static_cast<std::size_t>(N), 1.0);
    p.gamma = Matrix::Constant(N, N, 1.0 / static_cast<double>(N));
    for (Index i = 1; i <= N; ++i) p.tau.push_back(static_cast<double>(i));
    return p;
}

void ShowerParams::check() const {
    if (N < 1) throw ValidationError("shower model needs N >= 1 users");
    if (static_cast<Index>(alpha.size()) != N || static_cast<Index>(tau.size()) != N) {
        throw DimensionError("shower model: alpha and tau need N = " + std::to_string(N) + " entries");
    }
    require_shape(gamma, N, N, "gamma");
    for (std::size_t i = 0; i < tau.size(); ++i) {
        if (!(tau[i] > 0.0)) throw ValidationError("shower model: delays must be positive");
        if (i > 0 && !(tau[i] > tau[i - 1])) throw ValidationError("shower model: delays must be strictly increasing");
    }
}

Matrix ShowerParams::Gamma() const {
    Matrix g(N, N);
    for (Index i = 0; i < N; ++i) {
        for (Index j = 0; j < N; ++j) {
            g(i, j) = i == j ? -alpha[static_cast<std::size_t>(i)] : gamma(i, j) * alpha[static_cast<std::size_t>(j)];
        }
    }
    return g;
}

namespace {

/// Fills the delay-free blocks shared by both forms.
template <class Spec>
void fill_plant(Spec& s, const ShowerParams& params, const Matrix& G) {
    const Index N = params.N;
    const Matrix I = Matrix::Identity(N, N);
    s.A0 = Matrix::Zero(2 * N, 2 * N);
    s.A0.topRightCorner(N, N) = I;
    s.B1 = vstack({-I, -G});
    s.B2 = vstack({Matrix::Zero(N, N), I});
    Matrix C1 = Matrix::Zero(2, 2 * N);
    C1.row(0).head(N).setOnes();
    Matrix D12 = Matrix::Zero(2, N);
    D12.row(1).setConstant(0.1);
    s.D12 = D12;
    if constexpr (std::is_same_v<Spec, DDESpec>) {
        s.C10 = C1;
    } else {
        s.C1 = C1;
    }
}

}  // namespace

DDESpec build_shower_dde(const ShowerParams& params) {
    params.check();
    const Index N = params.N;
    const Matrix G = params.Gamma();
    DDESpec d = DDESpec::zeros(2 * N, N, N, 2, 0, params.tau);
    fill_plant(d, params, G);
    for (Index i = 0; i < N; ++i) {
        Matrix Ai = Matrix::Zero(2 * N, 2 * N);
        Ai.block(N, N + i, N, 1) = G.col(i);
        d.delayed[static_cast<std::size_t>(i)].A = Ai;
    }
    throw_if_invalid(validate(d), "build_shower_dde");
    return d;
}

DDFSpec build_shower_ddf(const ShowerParams& params) {
    params.check();
    const Index N = params.N;
    const Matrix G = params.Gamma();
    DDFSpec f = DDFSpec::zeros(2 * N, N, N, 2, 0, params.tau, std::vector<Index>(static_cast<std::size_t>(N), 1), N);
    fill_plant(f, params, G);
    f.Bv = vstack({Matrix::Zero(N, N), G});
    for (Index i = 0; i < N; ++i) {
        auto& ch = f.channels[static_cast<std::size_t>(i)];
        ch.Cr = Matrix::Zero(1, 2 * N);
        ch.Cr(0, N + i) = 1.0;
        ch.Cv = Matrix::Zero(N, 1);
        ch.Cv(i, 0) = 1.0;
    }
    f.provenance.push_back("build_shower_ddf: N = " + std::to_string(N));
    throw_if_invalid(validate(f), "build_shower_ddf");
    return f;
}

}  // namespace delayrep
