#include "delayrep/simulate/trajectory.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace delayrep {

namespace {

/// Lagrange cubic through the four samples around t on a uniform grid.
Vector cubic_at(const Matrix& samples, double t0, double dt, double t) {
    const Index count = samples.cols();
    if (count == 1) return samples.col(0);
    const double u = (t - t0) / dt;
    const double nearest = std::round(u);
    if (std::abs(u - nearest) < 1e-9 && nearest >= 0 && nearest < count) {
        return samples.col(static_cast<Index>(nearest));
    }
    const Index width = std::min<Index>(4, count);
    const Index seg = static_cast<Index>(std::floor(u));
    const Index first = std::clamp<Index>(seg - 1, 0, count - width);
    Vector acc = Vector::Zero(samples.rows());
    for (Index k = first; k < first + width; ++k) {
        double l = 1.0;
        for (Index j = first; j < first + width; ++j) {
            if (j != k) l *= (u - static_cast<double>(j)) / static_cast<double>(k - j);
        }
        acc += l * samples.col(k);
    }
    return acc;
}

}  // namespace

const Matrix& Trajectory::signal(const std::string& name) const {
    if (name == "x") return x;
    if (name == "xdot") return xdot;
    if (name == "y") return y;
    if (name == "z") return z;
    if (name == "v") return v;
    if (name == "w") return w;
    if (name == "u") return u;
    for (const char* prefix : {"r", "phi"}) {
        const std::string p(prefix);
        if (name.size() > p.size() && name.compare(0, p.size(), p) == 0 &&
            std::all_of(name.begin() + static_cast<std::ptrdiff_t>(p.size()), name.end(), ::isdigit)) {
            const auto i = static_cast<std::size_t>(std::stoul(name.substr(p.size())));
            if (i < channels.size()) return channels[i];
        }
    }
    throw DomainError("trajectory has no signal named '" + name + "'");
}

void Trajectory::check() const {
    const Index n = samples();
    for (Index k = 1; k < n; ++k) {
        const double expected = static_cast<double>(k) * dt;
        if (std::abs(t[static_cast<std::size_t>(k)] - expected) > 1e-9 * std::max(1.0, expected)) {
            throw ValidationError("trajectory grid is not uniform at sample " + std::to_string(k));
        }
    }
    auto check_one = [&](const Matrix& m, const std::string& name) {
        if (m.size() == 0) return;
        if (m.cols() != n) throw ValidationError("trajectory signal " + name + " has the wrong number of samples");
        if (!m.allFinite()) throw ValidationError("trajectory signal " + name + " is not finite");
    };
    check_one(x, "x");
    check_one(xdot, "xdot");
    check_one(y, "y");
    check_one(z, "z");
    check_one(v, "v");
    check_one(w, "w");
    check_one(u, "u");
    for (std::size_t i = 0; i < channels.size(); ++i) check_one(channels[i], "channel " + std::to_string(i));
}

std::size_t SimConfig::steps() const {
    return static_cast<std::size_t>(std::ceil(t_final / dt - 1e-9));
}

void SimConfig::check(double min_delay) const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("time step dt must be positive");
    if (!(t_final >= dt) || !std::isfinite(t_final)) throw ValidationError("t_final must be at least dt");
    if (std::isfinite(min_delay) && dt > min_delay / 4.0 * (1.0 + 1e-12)) {
        throw ValidationError("time step dt = " + std::to_string(dt) + " exceeds min delay / 4 = " +
                              std::to_string(min_delay / 4.0));
    }
    if (order < 2) throw ValidationError("collocation order must be at least 2");
}

double ComparisonReport::max_abs() const {
    double m = 0.0;
    for (const auto& d : deviations) m = std::max(m, d.max_abs);
    return m;
}

const SignalDeviation& ComparisonReport::at(const std::string& signal) const {
    for (const auto& d : deviations) {
        if (d.signal == signal) return d;
    }
    throw DomainError("comparison report has no signal '" + signal + "'");
}

ComparisonReport compare(const Trajectory& a, const Trajectory& b, const std::vector<std::string>& signals) {
    if (a.samples() == 0 || b.samples() == 0) throw DomainError("compare: empty trajectory");
    const bool same_grid = a.samples() == b.samples() && std::abs(a.dt - b.dt) <= 1e-12 * a.dt &&
                           std::abs(a.t.front() - b.t.front()) <= 1e-12 * std::max(1.0, std::abs(a.t.front()));
    const double b_start = b.t.front(), b_end = b.t.back();
    const double slack = 1e-9 * std::max(1.0, std::abs(b_end));
    if (a.t.front() > b_end + slack || a.t.back() < b_start - slack) {
        throw DomainError("compare: disjoint time ranges");
    }

    ComparisonReport rep;
    for (const auto& name : signals) {
        const Matrix& sa = a.signal(name);
        const Matrix& sb = b.signal(name);
        if (sa.rows() != sb.rows()) {
            throw DimensionError("compare: signal " + name + " has dim " + std::to_string(sa.rows()) + " vs " +
                                 std::to_string(sb.rows()));
        }
        SignalDeviation dev;
        dev.signal = name;
        double peak = 0.0;
        for (Index k = 0; k < a.samples(); ++k) {
            const double tk = a.t[static_cast<std::size_t>(k)];
            if (tk < b_start - slack) continue;
            if (tk > b_end + slack) break;
            const Vector ref = same_grid ? Vector(sb.col(k)) : cubic_at(sb, b.t.front(), b.dt, tk);
            const double err = sa.rows() > 0 ? (sa.col(k) - ref).cwiseAbs().maxCoeff() : 0.0;
            if (sa.rows() > 0) peak = std::max(peak, ref.cwiseAbs().maxCoeff());
            if (!(err <= dev.max_abs)) {
                dev.max_abs = err;
                dev.t_at_max = tk;
            }
        }
        dev.max_rel = peak > 0.0 ? dev.max_abs / peak : dev.max_abs;
        rep.deviations.push_back(dev);
    }
    return rep;
}

}  // namespace delayrep
