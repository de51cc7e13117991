#include "delayrep/core/validate.hpp"

#include <cmath>
#include <sstream>

namespace delayrep {

namespace {

std::string dims_str(Index r, Index c) { return std::to_string(r) + "x" + std::to_string(c); }

class Checker {
public:
    Checker(ValidationReport& rep, const ValidationOptions& opts) : rep_(rep), opts_(opts) {}

    void matrix(const Matrix& m, Index rows, Index cols, const std::string& name) {
        if (m.rows() != rows || m.cols() != cols) {
            rep_.add(name, "expected " + dims_str(rows, cols) + ", got " + shape_str(m));
        } else if (!m.allFinite()) {
            rep_.add(name, "non-finite entry");
        }
    }

    void kernel(const PolyKernel& k, Index rows, Index cols, double lower, const std::string& name) {
        if (k.rows() != rows || k.cols() != cols) {
            rep_.add(name, "expected " + dims_str(rows, cols) + ", got " + dims_str(k.rows(), k.cols()));
            return;
        }
        if (k.vars() != 1) rep_.add(name, "distributed kernel must depend on s only");
        if (std::abs(k.lower() - lower) > 1e-12 * std::max(1.0, std::abs(lower))) {
            rep_.add(name, "kernel interval starts at " + std::to_string(k.lower()) + ", expected " +
                               std::to_string(lower));
        }
        if (k.degree() > opts_.max_degree) {
            rep_.add(name, "degree " + std::to_string(k.degree()) + " exceeds cap " + std::to_string(opts_.max_degree));
        }
        for (const auto& c : k.coeffs()) {
            if (!c.allFinite()) {
                rep_.add(name, "non-finite coefficient");
                break;
            }
        }
    }

    void delays(const std::vector<double>& tau, Index K) {
        if (static_cast<Index>(tau.size()) != K) {
            rep_.add("delays", "expected " + std::to_string(K) + " delays, got " + std::to_string(tau.size()));
        }
        for (std::size_t i = 0; i < tau.size(); ++i) {
            if (!(tau[i] > 0.0) || !std::isfinite(tau[i])) {
                rep_.add("delays[" + std::to_string(i) + "]", "delays must be positive and finite");
            }
            if (i > 0 && !(tau[i] > tau[i - 1])) {
                rep_.add("delays[" + std::to_string(i) + "]", "delays not strictly increasing");
            }
        }
    }

    bool dims(const Dims& d) {
        if (d.n < 0 || d.m < 0 || d.p < 0 || d.q < 0 || d.r < 0 || d.K < 0 || d.n_v < 0) {
            rep_.add("dims", "dimensions must be nonnegative");
            return false;
        }
        return true;
    }

private:
    ValidationReport& rep_;
    const ValidationOptions& opts_;
};

std::string at(const std::string& name, std::size_t i) { return name + "[" + std::to_string(i) + "]"; }

void check_dde_body(const DDESpec& s, Checker& c, ValidationReport& rep) {
    const Dims& d = s.dims;
    c.delays(s.delays, d.K);
    c.matrix(s.A0, d.n, d.n, "A0");
    c.matrix(s.B1, d.n, d.m, "B1");
    c.matrix(s.B2, d.n, d.p, "B2");
    c.matrix(s.C10, d.q, d.n, "C10");
    c.matrix(s.D11, d.q, d.m, "D11");
    c.matrix(s.D12, d.q, d.p, "D12");
    c.matrix(s.C20, d.r, d.n, "C20");
    c.matrix(s.D21, d.r, d.m, "D21");
    c.matrix(s.D22, d.r, d.p, "D22");
    if (s.delayed.size() != s.delays.size()) rep.add("Ai", "one block set per delay required");
    if (s.distributed.size() != s.delays.size()) rep.add("Adi", "one kernel set per delay required");
    for (std::size_t i = 0; i < s.delayed.size(); ++i) {
        const auto& b = s.delayed[i];
        c.matrix(b.A, d.n, d.n, at("Ai", i));
        c.matrix(b.B1, d.n, d.m, at("B1i", i));
        c.matrix(b.B2, d.n, d.p, at("B2i", i));
        c.matrix(b.C1, d.q, d.n, at("C1i", i));
        c.matrix(b.D11, d.q, d.m, at("D11i", i));
        c.matrix(b.D12, d.q, d.p, at("D12i", i));
        c.matrix(b.C2, d.r, d.n, at("C2i", i));
        c.matrix(b.D21, d.r, d.m, at("D21i", i));
        c.matrix(b.D22, d.r, d.p, at("D22i", i));
    }
    for (std::size_t i = 0; i < s.distributed.size() && i < s.delays.size(); ++i) {
        const auto& k = s.distributed[i];
        const double lo = -s.delays[i];
        c.kernel(k.A, d.n, d.n, lo, at("Adi", i));
        c.kernel(k.B1, d.n, d.m, lo, at("B1di", i));
        c.kernel(k.B2, d.n, d.p, lo, at("B2di", i));
        c.kernel(k.C1, d.q, d.n, lo, at("C1di", i));
        c.kernel(k.D11, d.q, d.m, lo, at("D11di", i));
        c.kernel(k.D12, d.q, d.p, lo, at("D12di", i));
        c.kernel(k.C2, d.r, d.n, lo, at("C2di", i));
        c.kernel(k.D21, d.r, d.m, lo, at("D21di", i));
        c.kernel(k.D22, d.r, d.p, lo, at("D22di", i));
    }
}

bool nonzero(const Matrix& m) { return m.size() > 0 && !m.isZero(0.0); }

}  // namespace

void ValidationReport::merge(const ValidationReport& other) {
    violations.insert(violations.end(), other.violations.begin(), other.violations.end());
}

std::string ValidationReport::summary() const {
    std::ostringstream out;
    for (const auto& v : violations) out << v.item << ": " << v.message << "\n";
    return out.str();
}

std::string ValidationReport::first() const {
    if (violations.empty()) return {};
    return violations.front().item + ": " + violations.front().message;
}

ValidationReport validate(const DDESpec& spec, const ValidationOptions& opts) {
    ValidationReport rep;
    Checker c(rep, opts);
    if (!c.dims(spec.dims)) return rep;
    check_dde_body(spec, c, rep);
    return rep;
}

ValidationReport validate(const NDSSpec& spec, const ValidationOptions& opts) {
    ValidationReport rep;
    Checker c(rep, opts);
    if (!c.dims(spec.base.dims)) return rep;
    check_dde_body(spec.base, c, rep);
    const Dims& d = spec.base.dims;
    if (spec.neutral.size() != spec.base.delays.size()) rep.add("Ei", "one neutral block set per delay required");
    if (spec.neutral_distributed.size() != spec.base.delays.size()) {
        rep.add("Edi", "one neutral kernel set per delay required");
    }
    for (std::size_t i = 0; i < spec.neutral.size(); ++i) {
        c.matrix(spec.neutral[i].E, d.n, d.n, at("Ei", i));
        c.matrix(spec.neutral[i].E1, d.q, d.n, at("E1i", i));
        c.matrix(spec.neutral[i].E2, d.r, d.n, at("E2i", i));
    }
    for (std::size_t i = 0; i < spec.neutral_distributed.size() && i < spec.base.delays.size(); ++i) {
        const double lo = -spec.base.delays[i];
        c.kernel(spec.neutral_distributed[i].E, d.n, d.n, lo, at("Edi", i));
        c.kernel(spec.neutral_distributed[i].E1, d.q, d.n, lo, at("E1di", i));
        c.kernel(spec.neutral_distributed[i].E2, d.r, d.n, lo, at("E2di", i));
    }
    return rep;
}

ValidationReport validate(const DDFSpec& spec, const ValidationOptions& opts) {
    ValidationReport rep;
    Checker c(rep, opts);
    const Dims& d = spec.dims;
    if (!c.dims(d)) return rep;
    c.delays(spec.delays, d.K);
    if (static_cast<Index>(d.p_i.size()) != d.K) {
        rep.add("dims.p_i", "expected " + std::to_string(d.K) + " channel dimensions, got " +
                                std::to_string(d.p_i.size()));
        return rep;
    }
    for (std::size_t i = 0; i < d.p_i.size(); ++i) {
        if (d.p_i[i] < 0) rep.add(at("dims.p_i", i), "channel dimension must be nonnegative");
    }
    c.matrix(spec.A0, d.n, d.n, "A0");
    c.matrix(spec.B1, d.n, d.m, "B1");
    c.matrix(spec.B2, d.n, d.p, "B2");
    c.matrix(spec.C1, d.q, d.n, "C1");
    c.matrix(spec.D11, d.q, d.m, "D11");
    c.matrix(spec.D12, d.q, d.p, "D12");
    c.matrix(spec.C2, d.r, d.n, "C2");
    c.matrix(spec.D21, d.r, d.m, "D21");
    c.matrix(spec.D22, d.r, d.p, "D22");
    c.matrix(spec.Bv, d.n, d.n_v, "Bv");
    c.matrix(spec.D1v, d.q, d.n_v, "D1v");
    c.matrix(spec.D2v, d.r, d.n_v, "D2v");
    if (static_cast<Index>(spec.channels.size()) != d.K) {
        rep.add("channels", "expected " + std::to_string(d.K) + " channels, got " +
                                std::to_string(spec.channels.size()));
        return rep;
    }
    for (std::size_t i = 0; i < spec.channels.size(); ++i) {
        const auto& ch = spec.channels[i];
        const Index pi = d.p_i[i];
        c.matrix(ch.Cr, pi, d.n, at("Cri", i));
        c.matrix(ch.Br1, pi, d.m, at("Br1i", i));
        c.matrix(ch.Br2, pi, d.p, at("Br2i", i));
        c.matrix(ch.Drv, pi, d.n_v, at("Drvi", i));
        c.matrix(ch.Cv, d.n_v, pi, at("Cvi", i));
        if (i < spec.delays.size()) c.kernel(ch.Cvd, d.n_v, pi, -spec.delays[i], at("Cvdi", i));
    }
    if (!rep.ok()) return rep;
    const Matrix loop = spec.loop_matrix();
    if (loop.size() > 0) {
        Eigen::JacobiSVD<Matrix> svd(loop);
        const auto& sv = svd.singularValues();
        const double smin = sv(sv.size() - 1);
        const double cond = smin > 0.0 ? sv(0) / smin : INFINITY;
        if (!(cond <= opts.cond_bound)) {
            std::ostringstream msg;
            msg << "D_I singular: I - sum_i Chat_vi D_rvi has condition number " << cond << " (bound "
                << opts.cond_bound << ")";
            rep.add("Drvi", msg.str());
        }
    }
    return rep;
}

ValidationReport validate(const ODEPDESpec& spec, const ValidationOptions& opts) { return validate(spec.body, opts); }

InputRequirements input_requirements(const DDESpec& spec) {
    InputRequirements req;
    for (const auto& b : spec.delayed) {
        req.w_smooth = req.w_smooth || nonzero(b.B1) || nonzero(b.D11) || nonzero(b.D21);
        req.u_smooth = req.u_smooth || nonzero(b.B2) || nonzero(b.D12) || nonzero(b.D22);
    }
    return req;
}

InputRequirements input_requirements(const NDSSpec& spec) { return input_requirements(spec.base); }

InputRequirements input_requirements(const DDFSpec& spec) {
    InputRequirements req;
    for (const auto& ch : spec.channels) {
        req.w_smooth = req.w_smooth || nonzero(ch.Br1);
        req.u_smooth = req.u_smooth || nonzero(ch.Br2);
    }
    return req;
}

ValidationReport validate_inputs(const InputRequirements& req, Index m, Index p, const SignalDescriptor& w,
                                 const SignalDescriptor& u) {
    ValidationReport rep;
    if (w.dim() != m) rep.add("w", "expected " + std::to_string(m) + " components, got " + std::to_string(w.dim()));
    if (u.dim() != p) rep.add("u", "expected " + std::to_string(p) + " components, got " + std::to_string(u.dim()));
    auto smooth = [&](const SignalDescriptor& s, const std::string& name) {
        if (!s.differentiable()) rep.add(name, "delayed input must be in W^{1,2} (no jumps)");
        if (!s.vanishes_at_zero(1e-14)) rep.add(name, "delayed input must vanish at t = 0");
    };
    if (req.w_smooth) smooth(w, "w");
    if (req.u_smooth) smooth(u, "u");
    return rep;
}

void throw_if_invalid(const ValidationReport& report, const std::string& what) {
    if (!report.ok()) throw ValidationError(what + ": " + report.first());
}

}  // namespace delayrep
