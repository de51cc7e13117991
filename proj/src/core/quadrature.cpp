#include "delayrep/core/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace delayrep::quad {

namespace {

// (P_n(x), P_{n-1}(x)) by the three-term recurrence.
std::pair<double, double> legendre_pair(std::size_t n, double x) {
    double p0 = 1.0;
    double p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
    }
    return {p1, p0};
}

// Reference rule on [-1, 1], Newton iteration on P_n.
Rule compute_reference(std::size_t n) {
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const double nn = static_cast<double>(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nn + 0.5));
        for (int it = 0; it < 100; ++it) {
            const auto [pn, pm] = legendre_pair(n, x);
            const double dp = nn * (x * pn - pm) / (x * x - 1.0);
            const double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const auto [pn, pm] = legendre_pair(n, x);
        const double dp = nn * (x * pn - pm) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

const Rule& reference_rule(std::size_t n) {
    static std::mutex mu;
    static std::map<std::size_t, Rule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_reference(n)).first;
    return it->second;
}

}  // namespace

Rule gauss_legendre(std::size_t n, double a, double b) {
    if (n == 0) throw std::invalid_argument("gauss_legendre: n must be positive");
    const Rule& ref = reference_rule(n);
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (std::size_t i = 0; i < n; ++i) {
        r.nodes[i] = mid + half * ref.nodes[i];
        r.weights[i] = half * ref.weights[i];
    }
    return r;
}

std::vector<double> cgl_nodes(std::size_t m) {
    if (m < 2) throw std::invalid_argument("cgl_nodes: need at least 2 nodes");
    std::vector<double> s(m);
    const double nseg = static_cast<double>(m - 1);
    for (std::size_t j = 0; j < m; ++j) {
        s[j] = -0.5 * (1.0 + std::cos(std::numbers::pi * static_cast<double>(j) / nseg));
    }
    s.front() = -1.0;
    s.back() = 0.0;
    return s;
}

std::vector<double> clenshaw_curtis_weights(std::size_t m) {
    if (m < 2) throw std::invalid_argument("clenshaw_curtis_weights: need at least 2 nodes");
    const std::size_t n = m - 1;
    const double nn = static_cast<double>(n);
    std::vector<double> w(m, 0.0);
    std::vector<double> v(n > 1 ? n - 1 : 0, 1.0);
    const double pi = std::numbers::pi;
    auto theta = [&](std::size_t j) { return pi * static_cast<double>(j) / nn; };
    if (n % 2 == 0) {
        w[0] = 1.0 / (nn * nn - 1.0);
        w[n] = w[0];
        for (std::size_t k = 1; k < n / 2; ++k) {
            const double kk = static_cast<double>(k);
            for (std::size_t j = 1; j < n; ++j) v[j - 1] -= 2.0 * std::cos(2.0 * kk * theta(j)) / (4.0 * kk * kk - 1.0);
        }
        for (std::size_t j = 1; j < n; ++j) v[j - 1] -= std::cos(nn * theta(j)) / (nn * nn - 1.0);
    } else {
        w[0] = 1.0 / (nn * nn);
        w[n] = w[0];
        for (std::size_t k = 1; k <= (n - 1) / 2; ++k) {
            const double kk = static_cast<double>(k);
            for (std::size_t j = 1; j < n; ++j) v[j - 1] -= 2.0 * std::cos(2.0 * kk * theta(j)) / (4.0 * kk * kk - 1.0);
        }
    }
    for (std::size_t j = 1; j < n; ++j) w[j] = 2.0 * v[j - 1] / nn;
    // [-1,1] -> [-1,0]; the rule is symmetric so ordering is unaffected
    for (auto& x : w) x *= 0.5;
    return w;
}

std::vector<double> barycentric_weights(const std::vector<double>& nodes) {
    const std::size_t m = nodes.size();
    std::vector<double> w(m, 1.0);
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t j = 0; j < m; ++j) {
            if (j != k) w[k] /= (nodes[k] - nodes[j]);
        }
    }
    return w;
}

std::vector<double> lagrange_basis(const std::vector<double>& nodes, const std::vector<double>& bary,
                                   double x) {
    const std::size_t m = nodes.size();
    std::vector<double> l(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        if (x == nodes[k]) {
            l[k] = 1.0;
            return l;
        }
    }
    double denom = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        l[k] = bary[k] / (x - nodes[k]);
        denom += l[k];
    }
    for (auto& v : l) v /= denom;
    return l;
}

}  // namespace delayrep::quad
