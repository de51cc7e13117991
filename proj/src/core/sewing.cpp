#include "delayrep/core/sewing.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace delayrep {

namespace {

void check_histories(const DDFSpec& spec, const Vector& x0, const std::vector<HistoryFunction>& h, double scale) {
    require_shape(x0, spec.dims.n, 1, "x0");
    if (static_cast<Index>(h.size()) != spec.K()) {
        throw DimensionError("sewing: expected " + std::to_string(spec.K()) + " channel histories, got " +
                             std::to_string(h.size()));
    }
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (h[i].dim() != spec.dims.p_i[i]) {
            throw DimensionError("sewing: history " + std::to_string(i) + " has dim " + std::to_string(h[i].dim()) +
                                 ", channel needs " + std::to_string(spec.dims.p_i[i]));
        }
        const double need = scale > 0.0 ? -1.0 : -spec.delays[i];
        if (std::abs(h[i].lower() - need) > 1e-12 * std::max(1.0, -need)) {
            throw DomainError("sewing: history " + std::to_string(i) + " must live on [" + std::to_string(need) +
                              ", 0]");
        }
    }
}

std::vector<Vector> residuals(const DDFSpec& spec, const Vector& x0, const std::vector<HistoryFunction>& h,
                              bool unit_interval) {
    Vector v = Vector::Zero(spec.dims.n_v);
    for (std::size_t i = 0; i < h.size(); ++i) {
        const auto& ch = spec.channels[i];
        const double tau = spec.delays[i];
        if (unit_interval) {
            v += ch.Cv * h[i](-1.0);
            v += h[i].integrate(tau * ch.Cvd.rescaled(tau));
        } else {
            v += ch.Cv * h[i](-tau);
            v += h[i].integrate(ch.Cvd);
        }
    }
    std::vector<Vector> out;
    for (std::size_t i = 0; i < h.size(); ++i) {
        const auto& ch = spec.channels[i];
        out.push_back(h[i](0.0) - ch.Cr * x0 - ch.Drv * v);
    }
    return out;
}

}  // namespace

std::vector<Vector> check_sewing_ddf(const DDFSpec& spec, const Vector& x0, const std::vector<HistoryFunction>& r0) {
    check_histories(spec, x0, r0, 0.0);
    return residuals(spec, x0, r0, false);
}

std::vector<Vector> check_sewing_odepde(const ODEPDESpec& spec, const Vector& x0,
                                        const std::vector<HistoryFunction>& phi0) {
    check_histories(spec.body, x0, phi0, 1.0);
    return residuals(spec.body, x0, phi0, true);
}

double max_residual(const std::vector<Vector>& residuals) {
    double m = 0.0;
    for (const auto& r : residuals) {
        if (r.size() > 0) m = std::max(m, r.cwiseAbs().maxCoeff());
    }
    return m;
}

}  // namespace delayrep
