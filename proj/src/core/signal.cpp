#include "delayrep/core/signal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace delayrep {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_number(const std::string& s, const std::string& context) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("signal '" + context + "': cannot parse number '" + s + "'");
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

Signal parse_component(const std::string& text) {
    const auto parts = split(trim(text), ':');
    if (parts.empty()) throw ValidationError("empty signal descriptor");
    const std::string& kind = parts[0];
    auto need = [&](std::size_t n) {
        if (parts.size() != n) {
            throw ValidationError("signal '" + text + "': expected " + std::to_string(n - 1) + " parameter(s)");
        }
    };
    if (kind == "zero") {
        need(1);
        return Signal::zero();
    }
    if (kind == "const") {
        need(2);
        return Signal::constant(parse_number(parts[1], text));
    }
    if (kind == "step") {
        need(3);
        return Signal::step(parse_number(parts[1], text), parse_number(parts[2], text));
    }
    if (kind == "sin") {
        need(4);
        return Signal::sinusoid(parse_number(parts[1], text), parse_number(parts[2], text), parse_number(parts[3], text));
    }
    if (kind == "poly") {
        need(2);
        std::vector<double> c;
        for (const auto& tok : split(parts[1], ',')) c.push_back(parse_number(trim(tok), text));
        if (c.empty()) throw ValidationError("signal '" + text + "': no coefficients");
        return Signal::polynomial(std::move(c));
    }
    throw ValidationError("unknown signal kind '" + kind + "'");
}

}  // namespace

Signal Signal::zero() { return Signal{}; }

Signal Signal::constant(double c) { return polynomial({c}); }

Signal Signal::step(double t0, double level) {
    Signal s;
    s.kind_ = Kind::Step;
    s.params_ = {t0, level};
    return s;
}

Signal Signal::polynomial(std::vector<double> coeffs) {
    Signal s;
    s.kind_ = Kind::Polynomial;
    s.params_ = std::move(coeffs);
    return s;
}

Signal Signal::sinusoid(double amp, double freq, double phase) {
    Signal s;
    s.kind_ = Kind::Sinusoid;
    s.params_ = {amp, freq, phase};
    return s;
}

Signal Signal::sampled(std::vector<double> grid, std::vector<double> values) {
    if (grid.size() != values.size() || grid.size() < 4) {
        throw ValidationError("sampled signal needs at least 4 (time, value) pairs of equal count");
    }
    if (!std::is_sorted(grid.begin(), grid.end()) ||
        std::adjacent_find(grid.begin(), grid.end()) != grid.end()) {
        throw ValidationError("sampled signal grid must be strictly increasing");
    }
    Signal s;
    s.kind_ = Kind::Sampled;
    s.grid_ = std::move(grid);
    s.params_ = std::move(values);
    return s;
}

double Signal::raw(double t) const {
    switch (kind_) {
        case Kind::Zero:
            return 0.0;
        case Kind::Step:
            return t >= params_[0] ? params_[1] : 0.0;
        case Kind::Polynomial: {
            double acc = 0.0;
            for (auto it = params_.rbegin(); it != params_.rend(); ++it) acc = acc * t + *it;
            return acc;
        }
        case Kind::Sinusoid:
            return params_[0] * std::sin(params_[1] * t + params_[2]);
        case Kind::Sampled: {
            if (t <= grid_.front()) return params_.front();
            if (t >= grid_.back()) return params_.back();
            const auto hi = std::upper_bound(grid_.begin(), grid_.end(), t);
            auto seg = static_cast<std::ptrdiff_t>(hi - grid_.begin()) - 1;
            const auto last = static_cast<std::ptrdiff_t>(grid_.size()) - 4;
            const auto first = std::clamp<std::ptrdiff_t>(seg - 1, 0, last);
            double acc = 0.0;
            for (std::ptrdiff_t k = first; k < first + 4; ++k) {
                double l = 1.0;
                for (std::ptrdiff_t j = first; j < first + 4; ++j) {
                    if (j != k) l *= (t - grid_[static_cast<std::size_t>(j)]) /
                                     (grid_[static_cast<std::size_t>(k)] - grid_[static_cast<std::size_t>(j)]);
                }
                acc += l * params_[static_cast<std::size_t>(k)];
            }
            return acc;
        }
    }
    return 0.0;
}

double Signal::derivative(double t) const {
    switch (kind_) {
        case Kind::Zero:
            return 0.0;
        case Kind::Step:
            return 0.0;
        case Kind::Polynomial: {
            double acc = 0.0;
            for (std::size_t k = params_.size(); k-- > 1;) acc = acc * t + static_cast<double>(k) * params_[k];
            return acc;
        }
        case Kind::Sinusoid:
            return params_[0] * params_[1] * std::cos(params_[1] * t + params_[2]);
        case Kind::Sampled:
            break;
    }
    throw NumericalError("sampled signal has no analytic derivative");
}

Signal Signal::scaled(double alpha) const {
    Signal s = *this;
    switch (kind_) {
        case Kind::Zero:
            break;
        case Kind::Step:
            s.params_[1] *= alpha;
            break;
        case Kind::Sinusoid:
            s.params_[0] *= alpha;
            break;
        case Kind::Polynomial:
        case Kind::Sampled:
            for (auto& c : s.params_) c *= alpha;
            break;
    }
    return s;
}

bool Signal::differentiable() const {
    if (kind_ == Kind::Step) return params_[1] == 0.0;
    return true;
}

std::string Signal::describe() const {
    switch (kind_) {
        case Kind::Zero:
            return "zero";
        case Kind::Step:
            return "step:" + fmt(params_[0]) + ":" + fmt(params_[1]);
        case Kind::Polynomial: {
            if (params_.size() == 1) return "const:" + fmt(params_[0]);
            std::string s = "poly:";
            for (std::size_t k = 0; k < params_.size(); ++k) s += (k ? "," : "") + fmt(params_[k]);
            return s;
        }
        case Kind::Sinusoid:
            return "sin:" + fmt(params_[0]) + ":" + fmt(params_[1]) + ":" + fmt(params_[2]);
        case Kind::Sampled:
            return "sampled[" + std::to_string(grid_.size()) + "]";
    }
    return "zero";
}

SignalDescriptor SignalDescriptor::zeros(Index dim) {
    return SignalDescriptor(std::vector<Signal>(static_cast<std::size_t>(dim), Signal::zero()));
}

SignalDescriptor SignalDescriptor::parse(const std::string& text, Index dim) {
    std::vector<Signal> comps;
    for (const auto& part : split(text, ';')) comps.push_back(parse_component(part));
    if (comps.size() == 1 && dim != 1) comps.assign(static_cast<std::size_t>(dim), comps.front());
    if (static_cast<Index>(comps.size()) != dim) {
        throw ValidationError("signal '" + text + "' has " + std::to_string(comps.size()) +
                              " components, expected " + std::to_string(dim));
    }
    return SignalDescriptor(std::move(comps));
}

Vector SignalDescriptor::value(double t) const {
    Vector v(dim());
    for (Index i = 0; i < dim(); ++i) v(i) = components_[static_cast<std::size_t>(i)].value(t);
    return v;
}

Vector SignalDescriptor::raw(double t) const {
    Vector v(dim());
    for (Index i = 0; i < dim(); ++i) v(i) = components_[static_cast<std::size_t>(i)].raw(t);
    return v;
}

Vector SignalDescriptor::derivative(double t) const {
    Vector v(dim());
    for (Index i = 0; i < dim(); ++i) {
        v(i) = t < 0.0 ? 0.0 : components_[static_cast<std::size_t>(i)].derivative(t);
    }
    return v;
}

bool SignalDescriptor::has_analytic_derivative() const {
    return std::all_of(components_.begin(), components_.end(),
                       [](const Signal& s) { return s.has_analytic_derivative(); });
}

bool SignalDescriptor::differentiable() const {
    return std::all_of(components_.begin(), components_.end(), [](const Signal& s) { return s.differentiable(); });
}

bool SignalDescriptor::vanishes_at_zero(double tol) const {
    return std::all_of(components_.begin(), components_.end(),
                       [tol](const Signal& s) { return std::abs(s.initial_value()) <= tol; });
}

bool SignalDescriptor::is_zero() const {
    return std::all_of(components_.begin(), components_.end(),
                       [](const Signal& s) { return s.kind() == Signal::Kind::Zero; });
}

SignalDescriptor SignalDescriptor::scaled(double alpha) const {
    std::vector<Signal> out;
    out.reserve(components_.size());
    for (const auto& s : components_) out.push_back(s.scaled(alpha));
    return SignalDescriptor(std::move(out));
}

std::string SignalDescriptor::describe() const {
    std::string s;
    for (std::size_t i = 0; i < components_.size(); ++i) s += (i ? ";" : "") + components_[i].describe();
    return s;
}

}  // namespace delayrep
