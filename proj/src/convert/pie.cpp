#include "delayrep/convert/pie.hpp"

#include <Eigen/LU>

#include <string>

namespace delayrep {

namespace {

constexpr double kRcondFloor = 1e-12;

Matrix row_selector(Index total, Index offset, Index size) {
    Matrix s = Matrix::Zero(size, total);
    s.block(0, offset, size, size).setIdentity();
    return s;
}

/// Horizontal concatenation that stays well defined for an empty list.
PolyKernel hcat(const std::vector<PolyKernel>& parts, Index rows) {
    if (parts.empty()) return PolyKernel::zero(rows, 0);
    return PolyKernel::hstack(parts);
}

/// Fills every operator of the 8-tuple from the scratch quantities.
PIESpec assemble(const Dims& dims, const std::vector<double>& delays, const ConversionScratch& s) {
    const Index n = dims.n, m = dims.m, p = dims.p, q = dims.q, r = dims.r;
    const Index np = dims.total_channel_dim();
    PIESpec pie;
    pie.dims = dims;
    pie.dims.K = static_cast<Index>(delays.size());
    pie.delays = delays;

    pie.T = PIOperator::zero(n, n, np, np);
    pie.T.P = Matrix::Identity(n, n);
    pie.T.Q2 = PolyKernel::constant(s.T0);
    pie.T.R1 = s.Ta;
    pie.T.R2 = s.Tb;

    pie.A = PIOperator::zero(n, n, np, np);
    pie.A.P = s.A0;
    pie.A.Q1 = s.A;
    pie.A.R0 = PolyKernel::constant(s.I_tau);

    pie.B1 = PIOperator::zero(n, m, np, 0);
    pie.B1.P = s.B1;
    pie.B2 = PIOperator::zero(n, p, np, 0);
    pie.B2.P = s.B2;
    pie.BT1 = PIOperator::zero(n, m, np, 0);
    pie.BT1.Q2 = PolyKernel::constant(s.T1);
    pie.BT2 = PIOperator::zero(n, p, np, 0);
    pie.BT2.Q2 = PolyKernel::constant(s.T2);

    pie.C1 = PIOperator::zero(q, n, 0, np);
    pie.C1.P = s.C10;
    pie.C1.Q1 = s.C11;
    pie.C2 = PIOperator::zero(r, n, 0, np);
    pie.C2.P = s.C20;
    pie.C2.Q1 = s.C21;

    auto direct = [](Index rows, Index cols, const Matrix& d) {
        PIOperator op = PIOperator::zero(rows, cols, 0, 0);
        op.P = d;
        return op;
    };
    pie.D11 = direct(q, m, s.D11);
    pie.D12 = direct(q, p, s.D12);
    pie.D21 = direct(r, m, s.D21);
    pie.D22 = direct(r, p, s.D22);
    return pie;
}

/// Splits a (n+q+r) x (n+m+p) block matrix into the nine bold blocks.
void split_bold(const Dims& d, const Matrix& bold, ConversionScratch& s) {
    const Index n = d.n, m = d.m, p = d.p, q = d.q, r = d.r;
    s.A0 = bold.block(0, 0, n, n);
    s.B1 = bold.block(0, n, n, m);
    s.B2 = bold.block(0, n + m, n, p);
    s.C10 = bold.block(n, 0, q, n);
    s.D11 = bold.block(n, n, q, m);
    s.D12 = bold.block(n, n + m, q, p);
    s.C20 = bold.block(n + q, 0, r, n);
    s.D21 = bold.block(n + q, n, r, m);
    s.D22 = bold.block(n + q, n + m, r, p);
}

Matrix instantaneous(const DDFSpec& d) {
    return vstack({hstack({d.A0, d.B1, d.B2}), hstack({d.C1, d.D11, d.D12}), hstack({d.C2, d.D21, d.D22})});
}

}  // namespace

PIESpec ddf_to_pie(const DDFSpec& ddf, ConversionScratch* scratch) {
    throw_if_invalid(validate(ddf), "ddf_to_pie");
    const Dims& d = ddf.dims;
    const Index nv = d.n_v;
    const Index np = d.total_channel_dim();
    const std::size_t K = ddf.delays.size();

    ConversionScratch s;
    const Matrix loop = ddf.loop_matrix();
    if (nv > 0) {
        const Eigen::PartialPivLU<Matrix> lu(loop);
        const double rc = lu.rcond();
        if (!(rc > kRcondFloor)) {
            throw NumericalError("ill-posed DDF: I - sum_i C_hat_i D_rvi is singular (rcond " + std::to_string(rc) +
                                 ", limit cond 1e12)");
        }
        s.D_I = lu.inverse();
    } else {
        s.D_I = Matrix(0, 0);
    }

    Matrix coupling = Matrix::Zero(nv, d.n + d.m + d.p);
    std::vector<Matrix> drv_rows;
    for (std::size_t i = 0; i < K; ++i) {
        const auto& ch = ddf.channels[i];
        const double tau = ddf.delays[i];
        s.C_hat.push_back(ddf.c_hat(i));
        coupling += s.C_hat.back() * hstack({ch.Cr, ch.Br1, ch.Br2});
        PolyKernel ci = PolyKernel::constant(ch.Cv) + tau * ch.Cvd.rescaled(tau).antiderivative_from(-1.0);
        s.C_I.push_back(-1.0 * (s.D_I * ci));
        drv_rows.push_back(ch.Drv);
    }
    const Matrix vx = s.D_I * coupling;
    s.C_vx = vx.leftCols(d.n);
    s.D_vw = vx.middleCols(d.n, d.m);
    s.D_vu = vx.rightCols(d.p);

    Matrix r_rows(np, d.n + d.m + d.p);
    std::vector<Matrix> taus;
    for (std::size_t i = 0; i < K; ++i) {
        const auto& ch = ddf.channels[i];
        r_rows.middleRows(ddf.channel_offset(i), ch.Cr.rows()) = hstack({ch.Cr, ch.Br1, ch.Br2});
        taus.push_back(Matrix::Identity(ch.Cr.rows(), ch.Cr.rows()) / ddf.delays[i]);
    }
    const Matrix drv = K > 0 ? vstack(drv_rows) : Matrix::Zero(0, nv);
    const Matrix t_all = r_rows + drv * vx;
    s.T0 = t_all.leftCols(d.n);
    s.T1 = t_all.middleCols(d.n, d.m);
    s.T2 = t_all.rightCols(d.p);
    s.I_tau = K > 0 ? block_diag(taus) : Matrix(0, 0);

    const PolyKernel ci_all = hcat(s.C_I, nv);
    s.Ta = (drv * ci_all).lift_in_theta();
    s.Tb = s.Ta + PolyKernel::constant(-Matrix::Identity(np, np), 2);

    const Matrix out_v = vstack({ddf.Bv, ddf.D1v, ddf.D2v});
    split_bold(d, instantaneous(ddf) + out_v * vx, s);
    s.A = ddf.Bv * ci_all;
    s.C11 = ddf.D1v * ci_all;
    s.C21 = ddf.D2v * ci_all;

    PIESpec pie = assemble(d, ddf.delays, s);
    if (scratch) *scratch = std::move(s);
    return pie;
}

PIESpec odepde_to_pie(const ODEPDESpec& odepde, ConversionScratch* scratch) {
    return ddf_to_pie(odepde.body, scratch);
}

PIESpec dde_to_pie(const DDESpec& dde, ConversionScratch* scratch) {
    throw_if_invalid(validate(dde), "dde_to_pie");
    const Dims& d = dde.dims;
    const Index width = d.n + d.m + d.p;
    const Index height = d.n + d.q + d.r;
    const std::size_t K = dde.delays.size();

    Dims dims = d;
    dims.p_i.assign(K, width);
    dims.n_v = height;

    ConversionScratch s;
    Matrix bold = dde.instantaneous();
    std::vector<Matrix> taus;
    for (std::size_t i = 0; i < K; ++i) {
        const double tau = dde.delays[i];
        const Matrix stacked = dde.stacked(i);
        const PolyKernel kern = dde.stacked_kernel(i);
        bold += stacked + kern.integral(-tau, 0.0);
        s.X.push_back(PolyKernel::constant(stacked) + tau * kern.rescaled(tau).antiderivative_from(-1.0));
        taus.push_back(Matrix::Identity(width, width) / tau);
    }
    split_bold(d, bold, s);

    const Matrix id = Matrix::Identity(width, width);
    std::vector<Matrix> t0, t1, t2;
    for (std::size_t i = 0; i < K; ++i) {
        t0.push_back(id.leftCols(d.n));
        t1.push_back(id.middleCols(d.n, d.m));
        t2.push_back(id.rightCols(d.p));
    }
    const Index np = dims.total_channel_dim();
    s.T0 = K > 0 ? vstack(t0) : Matrix(0, d.n);
    s.T1 = K > 0 ? vstack(t1) : Matrix(0, d.m);
    s.T2 = K > 0 ? vstack(t2) : Matrix(0, d.p);
    s.I_tau = K > 0 ? block_diag(taus) : Matrix(0, 0);
    s.Ta = PolyKernel::zero(np, np, 2);
    s.Tb = PolyKernel::constant(-Matrix::Identity(np, np), 2);

    const PolyKernel row = -1.0 * hcat(s.X, height);
    s.A = row_selector(height, 0, d.n) * row;
    s.C11 = row_selector(height, d.n, d.q) * row;
    s.C21 = row_selector(height, d.n + d.q, d.r) * row;

    PIESpec pie = assemble(dims, dde.delays, s);
    if (scratch) *scratch = std::move(s);
    return pie;
}

ValidationReport validate(const PIESpec& pie) {
    ValidationReport rep;
    const Dims& d = pie.dims;
    const Index np = d.total_channel_dim();
    struct Expect {
        const char* name;
        const PIOperator* op;
        Index n_out, n_in, p_out, p_in;
    };
    const Expect expected[] = {
        {"T", &pie.T, d.n, d.n, np, np},     {"A", &pie.A, d.n, d.n, np, np},
        {"B1", &pie.B1, d.n, d.m, np, 0},    {"B2", &pie.B2, d.n, d.p, np, 0},
        {"BT1", &pie.BT1, d.n, d.m, np, 0},  {"BT2", &pie.BT2, d.n, d.p, np, 0},
        {"C1", &pie.C1, d.q, d.n, 0, np},    {"C2", &pie.C2, d.r, d.n, 0, np},
        {"D11", &pie.D11, d.q, d.m, 0, 0},   {"D12", &pie.D12, d.q, d.p, 0, 0},
        {"D21", &pie.D21, d.r, d.m, 0, 0},   {"D22", &pie.D22, d.r, d.p, 0, 0},
    };
    for (const auto& e : expected) {
        const PIOperator& op = *e.op;
        if (op.n_out != e.n_out || op.n_in != e.n_in || op.p_out != e.p_out || op.p_in != e.p_in) {
            rep.add(e.name, "operator sizes do not conform to (n, m, p, q, r, sum p_i)");
            continue;
        }
        try {
            op.check();
        } catch (const Error& ex) {
            rep.add(e.name, ex.what());
        }
    }
    if (static_cast<Index>(pie.delays.size()) != static_cast<Index>(d.p_i.size())) {
        rep.add("delays", "one channel dim per delay required");
    }
    for (double tau : pie.delays) {
        if (!(tau > 0.0)) rep.add("delays", "delays must be positive");
    }
    if (!rep.ok()) return rep;

    auto require_zero = [&](const char* name, bool zero, const char* block) {
        if (!zero) rep.add(name, std::string(block) + " block must be zero");
    };
    require_zero("T", pie.T.Q1.is_zero() && pie.T.R0.is_zero(), "Q1/R0");
    require_zero("T", pie.T.P.isIdentity(0.0), "P - I");
    require_zero("A", pie.A.Q2.is_zero() && pie.A.R1.is_zero() && pie.A.R2.is_zero(), "Q2/R1/R2");
    require_zero("B1", pie.B1.Q2.is_zero(), "Q2");
    require_zero("B2", pie.B2.Q2.is_zero(), "Q2");
    require_zero("BT1", pie.BT1.P.isZero(0.0), "P");
    require_zero("BT2", pie.BT2.P.isZero(0.0), "P");
    return rep;
}

}  // namespace delayrep
