#include "delayrep/convert/minimal.hpp"

#include "delayrep/core/validate.hpp"

#include <Eigen/SVD>

#include <sstream>

namespace delayrep {

DDFSpec minimal_ddf_from_dde(const DDESpec& dde, double rank_tol) {
    throw_if_invalid(validate(dde), "minimal_ddf_from_dde");
    if (!(rank_tol >= 0.0)) throw ValidationError("rank tolerance must be non-negative");
    const Dims& dm = dde.dims;
    const Index width = dm.n + dm.m + dm.p;
    const Index height = dm.n + dm.q + dm.r;

    struct Kept {
        double tau;
        Matrix basis;  ///< width x rank, orthonormal columns spanning the row space
        Matrix G;
        PolyKernel kernel;
    };
    std::vector<Kept> kept;
    std::vector<std::string> notes;
    for (std::size_t i = 0; i < dde.delays.size(); ++i) {
        const Matrix G = dde.stacked(i);
        const PolyKernel kernel = dde.stacked_kernel(i).trimmed();
        std::vector<Matrix> rows{G};
        for (int j = 0; j <= kernel.degree(); ++j) rows.push_back(kernel.coeff(j));
        const Matrix stacked = vstack(rows);

        const Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        const double cut = sv.size() > 0 ? rank_tol * sv(0) : 0.0;
        Index rank = 0;
        while (rank < sv.size() && sv(rank) > cut && sv(rank) > 0.0) ++rank;

        std::ostringstream note;
        note << "minimal_ddf: delay " << dde.delays[i] << " (index " << i << ") ";
        if (rank == 0) {
            note << "dropped, rank 0";
            notes.push_back(note.str());
            continue;
        }
        note << "rank " << rank << " of " << width;
        notes.push_back(note.str());
        kept.push_back({dde.delays[i], svd.matrixV().leftCols(rank), G, kernel});
    }

    std::vector<double> delays;
    std::vector<Index> p_i;
    for (const auto& k : kept) {
        delays.push_back(k.tau);
        p_i.push_back(k.basis.cols());
    }
    const Index nv = height;
    DDFSpec f = DDFSpec::zeros(dm.n, dm.m, dm.p, dm.q, dm.r, delays, p_i, nv);
    f.A0 = dde.A0;
    f.B1 = dde.B1;
    f.B2 = dde.B2;
    f.C1 = dde.C10;
    f.D11 = dde.D11;
    f.D12 = dde.D12;
    f.C2 = dde.C20;
    f.D21 = dde.D21;
    f.D22 = dde.D22;
    const Matrix id = Matrix::Identity(nv, nv);
    f.Bv = id.topRows(dm.n);
    f.D1v = id.middleRows(dm.n, dm.q);
    f.D2v = id.bottomRows(dm.r);
    for (std::size_t i = 0; i < kept.size(); ++i) {
        const auto& k = kept[i];
        auto& ch = f.channels[i];
        const Matrix rows = k.basis.transpose();
        ch.Cr = rows.leftCols(dm.n);
        ch.Br1 = rows.middleCols(dm.n, dm.m);
        ch.Br2 = rows.rightCols(dm.p);
        ch.Cv = k.G * k.basis;
        ch.Cvd = (k.kernel * k.basis).with_lower(-k.tau);
    }
    f.provenance = std::move(notes);
    return f;
}

}  // namespace delayrep
