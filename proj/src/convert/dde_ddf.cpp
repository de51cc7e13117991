#include "delayrep/convert/dde_ddf.hpp"

#include "delayrep/core/validate.hpp"

#include <string>

namespace delayrep {

namespace {

Matrix eye(Index rows, Index cols, Index row0, Index col0, Index size) {
    Matrix m = Matrix::Zero(rows, cols);
    m.block(row0, col0, size, size).setIdentity();
    return m;
}

/// Shared skeleton: instantaneous matrices carried over, v fed back through identity selectors.
DDFSpec skeleton(const DDESpec& d, const std::vector<Index>& p_i) {
    const Dims& dm = d.dims;
    const Index nv = dm.n + dm.q + dm.r;
    DDFSpec f = DDFSpec::zeros(dm.n, dm.m, dm.p, dm.q, dm.r, d.delays, p_i, nv);
    f.A0 = d.A0;
    f.B1 = d.B1;
    f.B2 = d.B2;
    f.C1 = d.C10;
    f.D11 = d.D11;
    f.D12 = d.D12;
    f.C2 = d.C20;
    f.D21 = d.D21;
    f.D22 = d.D22;
    f.Bv = eye(dm.n, nv, 0, 0, dm.n);
    f.D1v = eye(dm.q, nv, 0, dm.n, dm.q);
    f.D2v = eye(dm.r, nv, 0, dm.n + dm.q, dm.r);
    return f;
}

}  // namespace

DDFSpec dde_to_ddf(const DDESpec& dde) {
    throw_if_invalid(validate(dde), "dde_to_ddf");
    const Dims& dm = dde.dims;
    const Index pi = dm.n + dm.m + dm.p;
    DDFSpec f = skeleton(dde, std::vector<Index>(dde.delays.size(), pi));
    for (std::size_t i = 0; i < dde.delays.size(); ++i) {
        auto& ch = f.channels[i];
        const Matrix id = Matrix::Identity(pi, pi);
        ch.Cr = id.leftCols(dm.n);
        ch.Br1 = id.middleCols(dm.n, dm.m);
        ch.Br2 = id.rightCols(dm.p);
        ch.Cv = dde.stacked(i);
        ch.Cvd = dde.stacked_kernel(i);
    }
    f.provenance.push_back("dde_to_ddf: " + std::to_string(dde.delays.size()) + " channels of dim " +
                           std::to_string(pi));
    return f;
}

DDFSpec nds_to_ddf(const NDSSpec& nds) {
    throw_if_invalid(validate(nds), "nds_to_ddf");
    const DDESpec& d = nds.base;
    const Dims& dm = d.dims;
    const Index pi = 2 * dm.n + dm.m + dm.p;
    DDFSpec f = skeleton(d, std::vector<Index>(d.delays.size(), pi));
    const Index nv = f.dims.n_v;
    for (std::size_t i = 0; i < d.delays.size(); ++i) {
        auto& ch = f.channels[i];
        const Index top = dm.n + dm.m + dm.p;
        Matrix rows = Matrix::Zero(pi, top);
        rows.topRows(top).setIdentity();
        rows.bottomRows(dm.n) = hstack({d.A0, d.B1, d.B2});
        ch.Cr = rows.leftCols(dm.n);
        ch.Br1 = rows.middleCols(dm.n, dm.m);
        ch.Br2 = rows.rightCols(dm.p);
        ch.Drv = Matrix::Zero(pi, nv);
        ch.Drv.bottomLeftCorner(dm.n, dm.n).setIdentity();
        ch.Cv = nds.stacked(i);
        ch.Cvd = nds.stacked_kernel(i);
    }
    f.provenance.push_back("nds_to_ddf: " + std::to_string(d.delays.size()) + " channels of dim " +
                           std::to_string(pi));
    return f;
}

ODEPDESpec ddf_to_odepde(const DDFSpec& ddf) { return ODEPDESpec{ddf}; }

DDFSpec odepde_to_ddf(const ODEPDESpec& odepde) { return odepde.body; }

std::vector<HistoryFunction> ddf_to_odepde_history(const std::vector<HistoryFunction>& r0,
                                                   const std::vector<double>& delays) {
    if (r0.size() != delays.size()) throw DimensionError("history map: one history per delay required");
    std::vector<HistoryFunction> out;
    for (std::size_t i = 0; i < r0.size(); ++i) out.push_back(r0[i].compressed(delays[i]));
    return out;
}

std::vector<HistoryFunction> odepde_to_ddf_history(const std::vector<HistoryFunction>& phi0,
                                                   const std::vector<double>& delays) {
    if (phi0.size() != delays.size()) throw DimensionError("history map: one history per delay required");
    std::vector<HistoryFunction> out;
    for (std::size_t i = 0; i < phi0.size(); ++i) out.push_back(phi0[i].stretched(delays[i]));
    return out;
}

std::vector<HistoryFunction> dde_channel_histories(const DDESpec& dde, const HistoryFunction& x0) {
    if (x0.dim() != dde.dims.n) {
        throw DimensionError("x0 history has dim " + std::to_string(x0.dim()) + ", state dim is " +
                             std::to_string(dde.dims.n));
    }
    std::vector<HistoryFunction> out;
    for (std::size_t i = 0; i < dde.delays.size(); ++i) {
        HistoryFunction h = x0.restricted(-dde.delays[i]).padded_with_zeros(dde.dims.m + dde.dims.p);
        out.emplace_back(h.grid(), h.values(), static_cast<int>(i));
    }
    return out;
}

}  // namespace delayrep
