#include "delayrep/convert/sof.hpp"

#include "delayrep/core/validate.hpp"

#include <string>

namespace delayrep {

void SofPlant::check() const {
    const Index N = static_cast<Index>(delays.size());
    require_shape(A0, n(), n(), "A0");
    require_shape(B1, n(), m(), "B1");
    require_shape(C1, q(), n(), "C1");
    require_shape(D12, q(), p(), "D12");
    require_shape(C2, r(), n(), "C2");
    require_shape(D21, r(), m(), "D21");
    if (static_cast<Index>(B2.size()) != N || static_cast<Index>(D22.size()) != N) {
        throw DimensionError("sof plant: one B2 and one D22 block per delay required");
    }
    for (Index i = 0; i < N; ++i) {
        require_shape(B2[static_cast<std::size_t>(i)], n(), p(), "B2_" + std::to_string(i));
        require_shape(D22[static_cast<std::size_t>(i)], r(), p(), "D22_" + std::to_string(i));
    }
}

DDFSpec sof_network_to_ddf(const SofPlant& plant, const Matrix& F) {
    plant.check();
    const Index n = plant.n(), m = plant.m(), p = plant.p(), q = plant.q(), r = plant.r();
    if (F.rows() != p || F.cols() != r) {
        throw DimensionError("feedback gain F is " + shape_str(F) + ", expected " + std::to_string(p) + "x" +
                             std::to_string(r) + " (inputs x outputs)");
    }
    const std::size_t N = plant.delays.size();
    const Index nv = p * static_cast<Index>(N);

    DDFSpec f = DDFSpec::zeros(n, m, p, q, r, plant.delays, std::vector<Index>(N, p), nv);
    f.A0 = plant.A0;
    f.B1 = plant.B1;
    f.C1 = plant.C1 + plant.D12 * F * plant.C2;
    f.D11 = plant.D12 * F * plant.D21;
    f.C2 = plant.C2;
    f.D21 = plant.D21;
    f.Bv = N > 0 ? hstack(plant.B2) : Matrix::Zero(n, 0);
    f.D2v = N > 0 ? hstack(plant.D22) : Matrix::Zero(r, 0);
    f.D1v = plant.D12 * F * f.D2v;
    const Matrix drv = F * f.D2v;
    for (std::size_t i = 0; i < N; ++i) {
        auto& ch = f.channels[i];
        ch.Cr = F * plant.C2;
        ch.Br1 = F * plant.D21;
        ch.Drv = drv;
        ch.Cv = Matrix::Zero(nv, p);
        ch.Cv.middleRows(static_cast<Index>(i) * p, p).setIdentity();
    }
    f.provenance.push_back("sof_network_to_ddf: " + std::to_string(N) + " feedback channels of dim " +
                           std::to_string(p));
    throw_if_invalid(validate(f), "sof_network_to_ddf");
    return f;
}

}  // namespace delayrep
