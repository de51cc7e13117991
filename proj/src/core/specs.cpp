#include "delayrep/core/specs.hpp"

#include <algorithm>
#include <iterator>
#include <numeric>

namespace delayrep {

namespace {

bool same(const Matrix& a, const Matrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
}

bool kernel_equal(const PolyKernel& a, const PolyKernel& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols() || a.vars() != b.vars() || a.lower() != b.lower()) return false;
    const int d = std::max(a.degree(), b.degree());
    const PolyKernel pa = a.padded(d), pb = b.padded(d);
    const auto& ca = pa.coeffs();
    const auto& cb = pb.coeffs();
    for (std::size_t i = 0; i < ca.size(); ++i) {
        if (!same(ca[i], cb[i])) return false;
    }
    return true;
}

}  // namespace

Index Dims::total_channel_dim() const { return std::accumulate(p_i.begin(), p_i.end(), Index{0}); }

DDESpec DDESpec::zeros(Index n, Index m, Index p, Index q, Index r, std::vector<double> delays) {
    DDESpec d;
    d.dims = Dims{n, m, p, q, r, static_cast<Index>(delays.size()), {}, 0};
    d.delays = std::move(delays);
    d.A0 = Matrix::Zero(n, n);
    d.B1 = Matrix::Zero(n, m);
    d.B2 = Matrix::Zero(n, p);
    d.C10 = Matrix::Zero(q, n);
    d.D11 = Matrix::Zero(q, m);
    d.D12 = Matrix::Zero(q, p);
    d.C20 = Matrix::Zero(r, n);
    d.D21 = Matrix::Zero(r, m);
    d.D22 = Matrix::Zero(r, p);
    for (double tau : d.delays) {
        d.delayed.push_back({Matrix::Zero(n, n), Matrix::Zero(n, m), Matrix::Zero(n, p), Matrix::Zero(q, n),
                             Matrix::Zero(r, n), Matrix::Zero(q, m), Matrix::Zero(q, p), Matrix::Zero(r, m),
                             Matrix::Zero(r, p)});
        d.distributed.push_back({PolyKernel::zero(n, n, 1, -tau), PolyKernel::zero(n, m, 1, -tau),
                                 PolyKernel::zero(n, p, 1, -tau), PolyKernel::zero(q, n, 1, -tau),
                                 PolyKernel::zero(r, n, 1, -tau), PolyKernel::zero(q, m, 1, -tau),
                                 PolyKernel::zero(q, p, 1, -tau), PolyKernel::zero(r, m, 1, -tau),
                                 PolyKernel::zero(r, p, 1, -tau)});
    }
    return d;
}

Matrix DDESpec::instantaneous() const {
    return vstack({hstack({A0, B1, B2}), hstack({C10, D11, D12}), hstack({C20, D21, D22})});
}

Matrix DDESpec::stacked(std::size_t i) const {
    const auto& b = delayed.at(i);
    return vstack({hstack({b.A, b.B1, b.B2}), hstack({b.C1, b.D11, b.D12}), hstack({b.C2, b.D21, b.D22})});
}

PolyKernel DDESpec::stacked_kernel(std::size_t i) const {
    const auto& b = distributed.at(i);
    return PolyKernel::vstack({PolyKernel::hstack({b.A, b.B1, b.B2}), PolyKernel::hstack({b.C1, b.D11, b.D12}),
                               PolyKernel::hstack({b.C2, b.D21, b.D22})});
}

NDSSpec NDSSpec::zeros(Index n, Index m, Index p, Index q, Index r, std::vector<double> delays) {
    NDSSpec s;
    s.base = DDESpec::zeros(n, m, p, q, r, std::move(delays));
    for (double tau : s.base.delays) {
        s.neutral.push_back({Matrix::Zero(n, n), Matrix::Zero(q, n), Matrix::Zero(r, n)});
        s.neutral_distributed.push_back(
            {PolyKernel::zero(n, n, 1, -tau), PolyKernel::zero(q, n, 1, -tau), PolyKernel::zero(r, n, 1, -tau)});
    }
    return s;
}

Matrix NDSSpec::stacked(std::size_t i) const {
    const auto& e = neutral.at(i);
    return hstack({base.stacked(i), vstack({e.E, e.E1, e.E2})});
}

PolyKernel NDSSpec::stacked_kernel(std::size_t i) const {
    const auto& e = neutral_distributed.at(i);
    return PolyKernel::hstack({base.stacked_kernel(i), PolyKernel::vstack({e.E, e.E1, e.E2})});
}

bool NDSSpec::is_retarded() const {
    for (std::size_t i = 0; i < neutral.size(); ++i) {
        const auto& e = neutral[i];
        const auto& k = neutral_distributed[i];
        if (!e.E.isZero(0.0) || !e.E1.isZero(0.0) || !e.E2.isZero(0.0)) return false;
        if (!k.E.is_zero() || !k.E1.is_zero() || !k.E2.is_zero()) return false;
    }
    return true;
}

DDFSpec DDFSpec::zeros(Index n, Index m, Index p, Index q, Index r, std::vector<double> delays,
                       std::vector<Index> p_i, Index n_v) {
    if (p_i.size() != delays.size()) throw DimensionError("DDF: one channel dimension per delay required");
    DDFSpec d;
    d.dims = Dims{n, m, p, q, r, static_cast<Index>(delays.size()), p_i, n_v};
    d.delays = std::move(delays);
    d.A0 = Matrix::Zero(n, n);
    d.B1 = Matrix::Zero(n, m);
    d.B2 = Matrix::Zero(n, p);
    d.C1 = Matrix::Zero(q, n);
    d.D11 = Matrix::Zero(q, m);
    d.D12 = Matrix::Zero(q, p);
    d.C2 = Matrix::Zero(r, n);
    d.D21 = Matrix::Zero(r, m);
    d.D22 = Matrix::Zero(r, p);
    d.Bv = Matrix::Zero(n, n_v);
    d.D1v = Matrix::Zero(q, n_v);
    d.D2v = Matrix::Zero(r, n_v);
    for (std::size_t i = 0; i < d.delays.size(); ++i) {
        const Index pi = p_i[i];
        d.channels.push_back({Matrix::Zero(pi, n), Matrix::Zero(pi, m), Matrix::Zero(pi, p), Matrix::Zero(pi, n_v),
                              Matrix::Zero(n_v, pi), PolyKernel::zero(n_v, pi, 1, -d.delays[i])});
    }
    return d;
}

Matrix DDFSpec::c_hat(std::size_t i) const {
    const auto& ch = channels.at(i);
    return ch.Cv + ch.Cvd.integral(-delays.at(i), 0.0);
}

Matrix DDFSpec::loop_matrix() const {
    Matrix l = Matrix::Identity(dims.n_v, dims.n_v);
    for (std::size_t i = 0; i < channels.size(); ++i) l -= c_hat(i) * channels[i].Drv;
    return l;
}

Index DDFSpec::channel_offset(std::size_t i) const {
    Index off = 0;
    for (std::size_t k = 0; k < i; ++k) off += dims.p_i.at(k);
    return off;
}

bool DDFSpec::operator==(const DDFSpec& o) const {
    if (!(dims == o.dims) || delays != o.delays || channels.size() != o.channels.size()) return false;
    const Matrix* a[] = {&A0, &B1, &B2, &C1, &C2, &D11, &D12, &D21, &D22, &Bv, &D1v, &D2v};
    const Matrix* b[] = {&o.A0, &o.B1, &o.B2, &o.C1, &o.C2, &o.D11, &o.D12, &o.D21, &o.D22, &o.Bv, &o.D1v, &o.D2v};
    for (std::size_t k = 0; k < std::size(a); ++k) {
        if (!same(*a[k], *b[k])) return false;
    }
    for (std::size_t i = 0; i < channels.size(); ++i) {
        const auto& x = channels[i];
        const auto& y = o.channels[i];
        if (!same(x.Cr, y.Cr) || !same(x.Br1, y.Br1) || !same(x.Br2, y.Br2) || !same(x.Drv, y.Drv) ||
            !same(x.Cv, y.Cv)) {
            return false;
        }
        if (!kernel_equal(x.Cvd, y.Cvd)) return false;
    }
    return true;
}

}  // namespace delayrep
