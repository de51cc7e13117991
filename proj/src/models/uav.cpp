#include "delayrep/models/uav.hpp"

#include "delayrep/core/validate.hpp"
#include "delayrep/util/log.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace delayrep {

namespace {

Matrix random_matrix(std::mt19937& rng, Index rows, Index cols, double scale) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    Matrix out(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) out(i, j) = dist(rng);
    }
    return out;
}

/// Sorted distinct delays and, per input delay, the index it was merged into.
struct MergedDelays {
    std::vector<double> values;
    std::vector<std::size_t> index;
};

MergedDelays merge(const std::vector<double>& raw, double tol) {
    MergedDelays md;
    std::vector<double> sorted = raw;
    std::sort(sorted.begin(), sorted.end());
    for (double d : sorted) {
        if (md.values.empty() || d - md.values.back() > tol) md.values.push_back(d);
    }
    for (double d : raw) {
        const auto it = std::min_element(md.values.begin(), md.values.end(),
                                         [d](double a, double b) { return std::abs(a - d) < std::abs(b - d); });
        md.index.push_back(static_cast<std::size_t>(it - md.values.begin()));
    }
    return md;
}

void check_list(const std::vector<Matrix>& list, Index N, Index rows, Index cols, const std::string& name) {
    if (static_cast<Index>(list.size()) != N) throw DimensionError("uav: " + name + " needs one block per UAV");
    for (std::size_t i = 0; i < list.size(); ++i) require_shape(list[i], rows, cols, name + "_" + std::to_string(i));
}

}  // namespace

UAVParams UAVParams::example(Index N, Index n, Index m, Index p, Index r, std::uint32_t seed) {
    if (N < 1 || n < 1 || m < 0 || p < 0 || r < 0) throw ValidationError("uav example: invalid sizes");
    std::mt19937 rng(seed);
    UAVParams u;
    u.N = N;
    u.n = n;
    u.m = m;
    u.p = p;
    u.r = r;
    const double spread = 0.2 / static_cast<double>(std::max<Index>(N - 1, 1));
    for (Index i = 0; i < N; ++i) {
        u.a.push_back(random_matrix(rng, n, n, 0.3) - 1.5 * Matrix::Identity(n, n));
        std::vector<Matrix> row;
        for (Index j = 0; j < N; ++j) row.push_back(i == j ? Matrix::Zero(n, n) : random_matrix(rng, n, n, spread));
        u.coupling.push_back(row);
        u.b1.push_back(random_matrix(rng, n, m, 1.0));
        u.b2.push_back(random_matrix(rng, n, p, 1.0));
        u.c2.push_back(random_matrix(rng, r, n, 1.0));
        u.d21.push_back(random_matrix(rng, r, m, 0.5));
        u.d22.push_back(random_matrix(rng, r, p, 0.3));
        const auto k = static_cast<double>(i);
        u.process_delays.push_back(0.4 + 0.1 * k);
        u.input_delays.push_back(0.45 + 0.1 * k + 0.1 * static_cast<double>(N));
        u.output_delays.push_back(0.5 + 0.1 * k + 0.2 * static_cast<double>(N));
    }
    u.C1 = Matrix::Identity(n * N, n * N);
    u.D12 = Matrix::Zero(n * N, p);
    u.C1.conservativeResize(n * N + p, n * N);
    u.C1.bottomRows(p).setZero();
    u.D12.conservativeResize(n * N + p, p);
    u.D12.bottomRows(p) = 0.1 * Matrix::Identity(p, p);
    return u;
}

void UAVParams::check() const {
    if (N < 1) throw ValidationError("uav: N must be at least 1");
    if (n < 1) throw ValidationError("uav: state dim n must be at least 1");
    check_list(a, N, n, n, "a");
    check_list(b1, N, n, m, "b1");
    check_list(b2, N, n, p, "b2");
    check_list(c2, N, r, n, "c2");
    check_list(d21, N, r, m, "d21");
    if (!d22.empty()) check_list(d22, N, r, p, "d22");
    if (static_cast<Index>(coupling.size()) != N) throw DimensionError("uav: coupling needs N rows");
    for (std::size_t i = 0; i < coupling.size(); ++i) check_list(coupling[i], N, n, n, "coupling");
    require_shape(C1, C1.rows(), n * N, "C1");
    require_shape(D12, C1.rows(), p, "D12");
    for (const auto* list : {&process_delays, &input_delays, &output_delays}) {
        if (static_cast<Index>(list->size()) != N) throw DimensionError("uav: each delay list needs N entries");
        for (double d : *list) {
            if (!(d > 0.0) || !std::isfinite(d)) throw ValidationError("uav: delays must be positive");
        }
    }
}

Matrix UAVParams::A0() const {
    Matrix A = Matrix::Zero(n * N, n * N);
    for (Index i = 0; i < N; ++i) {
        for (Index j = 0; j < N; ++j) {
            const auto si = static_cast<std::size_t>(i), sj = static_cast<std::size_t>(j);
            A.block(i * n, j * n, n, n) = i == j ? a[si] : coupling[si][sj];
        }
    }
    return A;
}

std::vector<double> UAVParams::all_delays() const {
    std::vector<double> out = process_delays;
    out.insert(out.end(), input_delays.begin(), input_delays.end());
    out.insert(out.end(), output_delays.begin(), output_delays.end());
    return out;
}

DDESpec build_uav_dde(const UAVParams& P) {
    P.check();
    const MergedDelays md = merge(P.all_delays(), P.merge_tol);
    const Index N = P.N, n = P.n, r = P.r;
    DDESpec d = DDESpec::zeros(n * N, P.m, P.p, P.q(), r * N, md.values);
    d.A0 = P.A0();
    d.C10 = P.C1;
    d.D12 = P.D12;
    for (Index i = 0; i < N; ++i) {
        const auto si = static_cast<std::size_t>(i);
        auto& proc = d.delayed[md.index[si]];
        proc.B1.middleRows(i * n, n) += P.b1[si];
        auto& in = d.delayed[md.index[static_cast<std::size_t>(N + i)]];
        in.B2.middleRows(i * n, n) += P.b2[si];
        auto& out = d.delayed[md.index[static_cast<std::size_t>(2 * N + i)]];
        out.C2.block(i * r, i * n, r, n) += P.c2[si];
        out.D21.middleRows(i * r, r) += P.d21[si];
    }
    throw_if_invalid(validate(d), "build_uav_dde");
    return d;
}

DDFSpec build_uav_ddf(const UAVParams& P) {
    P.check();
    const Index N = P.N, n = P.n, m = P.m, p = P.p, r = P.r;
    const Index nx = n * N, ny = r * N;
    std::vector<std::string> notes;
    if (n >= m || n >= p) {
        const std::string msg = "warning: UAV state dim n = " + std::to_string(n) +
                                " is not below m and p; delaying full w/u would need fewer channel states";
        logging::info(msg);
        notes.push_back(msg);
    }

    // One logical channel per (kind, UAV); its rows and where its delayed value is fed back.
    struct Logical {
        Matrix Cr, Br1, Br2;
        Matrix Bv;   ///< nx x dim
        Matrix D2v;  ///< ny x dim
    };
    std::vector<Logical> logical;
    for (Index i = 0; i < N; ++i) {
        const auto si = static_cast<std::size_t>(i);
        Logical proc{Matrix::Zero(n, nx), P.b1[si], Matrix::Zero(n, p), Matrix::Zero(nx, n), Matrix::Zero(ny, n)};
        proc.Bv.middleRows(i * n, n).setIdentity();
        logical.push_back(proc);
    }
    for (Index i = 0; i < N; ++i) {
        const auto si = static_cast<std::size_t>(i);
        Logical in{Matrix::Zero(n, nx), Matrix::Zero(n, m), P.b2[si], Matrix::Zero(nx, n), Matrix::Zero(ny, n)};
        in.Bv.middleRows(i * n, n).setIdentity();
        logical.push_back(in);
    }
    for (Index i = 0; i < N; ++i) {
        const auto si = static_cast<std::size_t>(i);
        Logical out{Matrix::Zero(r, nx), P.d21[si], Matrix::Zero(r, p), Matrix::Zero(nx, r), Matrix::Zero(ny, r)};
        out.Cr.middleCols(i * n, n) = P.c2[si];
        out.D2v.middleRows(i * r, r).setIdentity();
        logical.push_back(out);
    }

    const MergedDelays md = merge(P.all_delays(), P.merge_tol);
    const std::size_t K = md.values.size();
    std::vector<std::vector<std::size_t>> members(K);
    for (std::size_t l = 0; l < logical.size(); ++l) members[md.index[l]].push_back(l);
    std::vector<Index> p_i;
    for (const auto& group : members) {
        Index dim = 0;
        for (std::size_t l : group) dim += logical[l].Cr.rows();
        p_i.push_back(dim);
    }
    Index nv = 0;
    for (Index d : p_i) nv += d;

    DDFSpec f = DDFSpec::zeros(nx, m, p, P.q(), ny, md.values, p_i, nv);
    f.A0 = P.A0();
    f.C1 = P.C1;
    f.D12 = P.D12;
    Index voff = 0;
    for (std::size_t k = 0; k < K; ++k) {
        auto& ch = f.channels[k];
        Index row = 0;
        for (std::size_t l : members[k]) {
            const Logical& lg = logical[l];
            const Index dim = lg.Cr.rows();
            ch.Cr.middleRows(row, dim) = lg.Cr;
            ch.Br1.middleRows(row, dim) = lg.Br1;
            ch.Br2.middleRows(row, dim) = lg.Br2;
            f.Bv.middleCols(voff + row, dim) = lg.Bv;
            f.D2v.middleCols(voff + row, dim) = lg.D2v;
            row += dim;
        }
        ch.Cv.middleRows(voff, p_i[k]).setIdentity();
        voff += p_i[k];
        if (members[k].size() > 1) notes.push_back("build_uav_ddf: " + std::to_string(members[k].size()) +
                                                   " channels merged at delay " + std::to_string(md.values[k]));
    }
    f.provenance = std::move(notes);
    throw_if_invalid(validate(f), "build_uav_ddf");
    return f;
}

SofPlant uav_sof_plant(const UAVParams& P) {
    P.check();
    const Index N = P.N, n = P.n, r = P.r;
    SofPlant plant;
    plant.A0 = P.A0();
    plant.B1 = vstack(P.b1);
    plant.C1 = P.C1;
    plant.D12 = P.D12;
    plant.C2 = Matrix::Zero(r * N, n * N);
    for (Index i = 0; i < N; ++i) plant.C2.block(i * r, i * n, r, n) = P.c2[static_cast<std::size_t>(i)];
    plant.D21 = vstack(P.d21);
    const MergedDelays md = merge(P.input_delays, P.merge_tol);
    plant.delays = md.values;
    plant.B2.assign(md.values.size(), Matrix::Zero(n * N, P.p));
    plant.D22.assign(md.values.size(), Matrix::Zero(r * N, P.p));
    for (Index i = 0; i < N; ++i) {
        const auto si = static_cast<std::size_t>(i);
        plant.B2[md.index[si]].middleRows(i * n, n) += P.b2[si];
        if (!P.d22.empty()) plant.D22[md.index[si]].middleRows(i * r, r) += P.d22[si];
    }
    return plant;
}

DDFSpec build_sof_network(const UAVParams& params, const Matrix& F) {
    return sof_network_to_ddf(uav_sof_plant(params), F);
}

}  // namespace delayrep
