#include "delayrep/piops/pi_operator.hpp"

#include "delayrep/core/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace delayrep {

namespace {

constexpr int kS = 0;
constexpr int kEta = 1;
constexpr int kTheta = 2;

/// Integration limit: a constant or one of the three variables.
struct Limit {
    int var = -1;
    double value = 0.0;
};

Limit at_value(double c) { return {-1, c}; }
Limit at_var(int v) { return {v, 0.0}; }

/// Matrix-valued polynomial in (s, eta, theta), dense in each exponent.
class Poly3 {
public:
    Poly3(Index rows, Index cols, std::array<int, 3> deg)
        : rows_(rows), cols_(cols), deg_(deg), c_(count(deg), Matrix::Zero(rows, cols)) {}

    static Poly3 from1(const PolyKernel& k, int var) {
        std::array<int, 3> deg{0, 0, 0};
        deg[static_cast<std::size_t>(var)] = k.degree();
        Poly3 out(k.rows(), k.cols(), deg);
        for (int e = 0; e <= k.degree(); ++e) {
            std::array<int, 3> ex{0, 0, 0};
            ex[static_cast<std::size_t>(var)] = e;
            out.at(ex) = k.coeff(e);
        }
        return out;
    }

    static Poly3 from2(const PolyKernel& k, int va, int vb) {
        std::array<int, 3> deg{0, 0, 0};
        deg[static_cast<std::size_t>(va)] = k.degree();
        deg[static_cast<std::size_t>(vb)] = k.degree();
        Poly3 out(k.rows(), k.cols(), deg);
        for (int i = 0; i <= k.degree(); ++i) {
            for (int j = 0; j <= k.degree(); ++j) {
                std::array<int, 3> ex{0, 0, 0};
                ex[static_cast<std::size_t>(va)] = i;
                ex[static_cast<std::size_t>(vb)] = j;
                out.at(ex) = k.coeff(i, j);
            }
        }
        return out;
    }

    Matrix& at(const std::array<int, 3>& e) { return c_[index(e)]; }
    const Matrix& at(const std::array<int, 3>& e) const { return c_[index(e)]; }

    friend Poly3 operator*(const Poly3& a, const Poly3& b) {
        if (a.cols_ != b.rows_) throw DimensionError("kernel product: inner dimension mismatch");
        Poly3 out(a.rows_, b.cols_, {a.deg_[0] + b.deg_[0], a.deg_[1] + b.deg_[1], a.deg_[2] + b.deg_[2]});
        if (out.rows_ == 0 || out.cols_ == 0 || a.cols_ == 0) return out;
        a.for_each([&](const std::array<int, 3>& ea, const Matrix& ma) {
            if (ma.isZero(0.0)) return;
            b.for_each([&](const std::array<int, 3>& eb, const Matrix& mb) {
                out.at({ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}).noalias() += ma * mb;
            });
        });
        return out;
    }

    Poly3& operator+=(const Poly3& o) {
        if (o.rows_ != rows_ || o.cols_ != cols_) throw DimensionError("kernel sum: shape mismatch");
        std::array<int, 3> deg{std::max(deg_[0], o.deg_[0]), std::max(deg_[1], o.deg_[1]),
                               std::max(deg_[2], o.deg_[2])};
        if (deg != deg_) {
            Poly3 grown(rows_, cols_, deg);
            for_each([&](const std::array<int, 3>& e, const Matrix& m) { grown.at(e) = m; });
            *this = std::move(grown);
        }
        o.for_each([&](const std::array<int, 3>& e, const Matrix& m) { at(e) += m; });
        return *this;
    }

    /// Replaces variable `var` by a constant or by another variable.
    Poly3 substitute(int var, Limit lim) const {
        std::array<int, 3> deg = deg_;
        const auto v = static_cast<std::size_t>(var);
        deg[v] = 0;
        if (lim.var >= 0) deg[static_cast<std::size_t>(lim.var)] += deg_[v];
        Poly3 out(rows_, cols_, deg);
        for_each([&](const std::array<int, 3>& e, const Matrix& m) {
            std::array<int, 3> t = e;
            t[v] = 0;
            if (lim.var >= 0) {
                t[static_cast<std::size_t>(lim.var)] += e[v];
                out.at(t) += m;
            } else {
                out.at(t) += std::pow(lim.value, e[v]) * m;
            }
        });
        return out;
    }

    /// int_lo^hi (.) d var
    Poly3 integrate(int var, Limit lo, Limit hi) const {
        const auto v = static_cast<std::size_t>(var);
        std::array<int, 3> deg = deg_;
        deg[v] += 1;
        Poly3 anti(rows_, cols_, deg);
        for_each([&](const std::array<int, 3>& e, const Matrix& m) {
            std::array<int, 3> t = e;
            t[v] += 1;
            anti.at(t) = m / static_cast<double>(t[v]);
        });
        Poly3 out = anti.substitute(var, hi);
        Poly3 low = anti.substitute(var, lo);
        low.scale(-1.0);
        out += low;
        return out;
    }

    void scale(double a) {
        for (auto& m : c_) m *= a;
    }

    Matrix constant() const {
        check_only({});
        return c_[0];
    }

    PolyKernel to1(int var) const {
        check_only({var});
        const int d = deg_[static_cast<std::size_t>(var)];
        std::vector<Matrix> c;
        for (int e = 0; e <= d; ++e) {
            std::array<int, 3> ex{0, 0, 0};
            ex[static_cast<std::size_t>(var)] = e;
            c.push_back(at(ex));
        }
        return PolyKernel::univariate(std::move(c)).trimmed();
    }

    PolyKernel to2(int va, int vb) const {
        check_only({va, vb});
        const int d = std::max(deg_[static_cast<std::size_t>(va)], deg_[static_cast<std::size_t>(vb)]);
        PolyKernel k = PolyKernel::zero(rows_, cols_, 2).padded(d);
        for_each([&](const std::array<int, 3>& e, const Matrix& m) {
            k.coeff(e[static_cast<std::size_t>(va)], e[static_cast<std::size_t>(vb)]) += m;
        });
        return k.trimmed();
    }

private:
    static std::size_t count(const std::array<int, 3>& d) {
        return static_cast<std::size_t>((d[0] + 1) * (d[1] + 1) * (d[2] + 1));
    }

    std::size_t index(const std::array<int, 3>& e) const {
        return static_cast<std::size_t>((e[0] * (deg_[1] + 1) + e[1]) * (deg_[2] + 1) + e[2]);
    }

    template <typename F>
    void for_each(F&& f) const {
        for (int i = 0; i <= deg_[0]; ++i)
            for (int j = 0; j <= deg_[1]; ++j)
                for (int k = 0; k <= deg_[2]; ++k) f(std::array<int, 3>{i, j, k}, c_[index({i, j, k})]);
    }

    /// Every variable outside `keep` must carry only its zeroth power.
    void check_only(std::initializer_list<int> keep) const {
        for_each([&](const std::array<int, 3>& e, const Matrix& m) {
            for (int v = 0; v < 3; ++v) {
                if (std::find(keep.begin(), keep.end(), v) != keep.end()) continue;
                if (e[static_cast<std::size_t>(v)] > 0 && !m.isZero(0.0)) {
                    throw Error("internal: polynomial still depends on an integrated variable");
                }
            }
        });
    }

    Index rows_;
    Index cols_;
    std::array<int, 3> deg_;
    std::vector<Matrix> c_;
};

void require_dims(const PolyKernel& k, Index rows, Index cols, int vars, const std::string& name) {
    if (k.rows() != rows || k.cols() != cols || k.vars() != vars) {
        throw DimensionError("PI operator block " + name + ": expected " + std::to_string(rows) + "x" +
                             std::to_string(cols) + " in " + std::to_string(vars) + " variable(s), got " +
                             std::to_string(k.rows()) + "x" + std::to_string(k.cols()) + " in " +
                             std::to_string(k.vars()));
    }
}

void check_degree(const PolyKernel& k, int max_degree, const std::string& name) {
    if (k.degree() > max_degree) {
        throw DegreeOverflow("composition produced degree " + std::to_string(k.degree()) + " in block " + name +
                             " (cap " + std::to_string(max_degree) + ")");
    }
}

}  // namespace

PIOperator PIOperator::zero(Index n_out, Index n_in, Index p_out, Index p_in) {
    PIOperator op;
    op.n_out = n_out;
    op.n_in = n_in;
    op.p_out = p_out;
    op.p_in = p_in;
    op.P = Matrix::Zero(n_out, n_in);
    op.Q1 = PolyKernel::zero(n_out, p_in);
    op.Q2 = PolyKernel::zero(p_out, n_in);
    op.R0 = PolyKernel::zero(p_out, p_in);
    op.R1 = PolyKernel::zero(p_out, p_in, 2);
    op.R2 = PolyKernel::zero(p_out, p_in, 2);
    return op;
}

PIOperator PIOperator::identity(Index n, Index p) {
    PIOperator op = zero(n, n, p, p);
    op.P = Matrix::Identity(n, n);
    op.R0 = PolyKernel::constant(Matrix::Identity(p, p));
    return op;
}

void PIOperator::check() const {
    require_shape(P, n_out, n_in, "PI operator block P");
    require_dims(Q1, n_out, p_in, 1, "Q1");
    require_dims(Q2, p_out, n_in, 1, "Q2");
    require_dims(R0, p_out, p_in, 1, "R0");
    require_dims(R1, p_out, p_in, 2, "R1");
    require_dims(R2, p_out, p_in, 2, "R2");
}

int PIOperator::degree() const {
    return std::max({Q1.degree(), Q2.degree(), R0.degree(), R1.degree(), R2.degree()});
}

HybridVector HybridVector::polynomial(Vector x, PolyKernel f) {
    if (f.vars() != 1 || f.cols() != 1) throw DimensionError("hybrid vector: function part must be a p x 1 kernel in s");
    HybridVector v;
    v.x_ = std::move(x);
    v.p_ = f.rows();
    v.poly_ = std::move(f);
    return v;
}

HybridVector HybridVector::function(Vector x, Index p, std::function<Vector(double)> f) {
    HybridVector v;
    v.x_ = std::move(x);
    v.p_ = p;
    v.poly_ = PolyKernel::zero(p, 1);
    v.func_ = std::move(f);
    return v;
}

Vector HybridVector::f(double s) const {
    if (func_) return func_(s);
    return poly_(s);
}

HybridVector apply(const PIOperator& op, const HybridVector& v) {
    op.check();
    if (v.n() != op.n_in || v.p() != op.p_in) {
        throw DimensionError("apply: operator expects (" + std::to_string(op.n_in) + ", " + std::to_string(op.p_in) +
                             "), vector has (" + std::to_string(v.n()) + ", " + std::to_string(v.p()) + ")");
    }
    const Vector& x = v.x();
    if (v.is_polynomial()) {
        const Poly3 f = Poly3::from1(v.poly(), kTheta);
        const Poly3 fs = Poly3::from1(v.poly(), kS);
        Vector xo = op.P * x;
        if (op.p_in > 0) {
            xo += (Poly3::from1(op.Q1, kTheta) * f).integrate(kTheta, at_value(-1.0), at_value(0.0)).constant();
        }
        Poly3 g = Poly3::from1(op.Q2 * Matrix(x), kS);
        if (op.p_in > 0) {
            g += Poly3::from1(op.R0, kS) * fs;
            g += (Poly3::from2(op.R1, kS, kTheta) * f).integrate(kTheta, at_value(-1.0), at_var(kS));
            g += (Poly3::from2(op.R2, kS, kTheta) * f).integrate(kTheta, at_var(kS), at_value(0.0));
        }
        return HybridVector::polynomial(xo, g.to1(kS));
    }

    // Quadrature path: panels of Gauss-Legendre on each integral.
    constexpr std::size_t kPanels = 8;
    constexpr std::size_t kNodes = 12;
    auto integrate = [](double a, double b, const std::function<Vector(double)>& h, Index dim) {
        Vector acc = Vector::Zero(dim);
        if (b <= a) return acc;
        for (std::size_t k = 0; k < kPanels; ++k) {
            const double lo = a + (b - a) * static_cast<double>(k) / kPanels;
            const double hi = a + (b - a) * static_cast<double>(k + 1) / kPanels;
            const auto rule = quad::gauss_legendre(kNodes, lo, hi);
            for (std::size_t q = 0; q < kNodes; ++q) acc += rule.weights[q] * h(rule.nodes[q]);
        }
        return acc;
    };
    Vector xo = op.P * x;
    if (op.p_in > 0) xo += integrate(-1.0, 0.0, [&](double s) { return Vector(op.Q1(s) * v.f(s)); }, op.n_out);
    auto g = [op, v, x, integrate](double s) {
        Vector out = op.Q2(s) * x;
        if (op.p_in == 0) return out;
        out += op.R0(s) * v.f(s);
        out += integrate(-1.0, s, [&](double t) { return Vector(op.R1(s, t) * v.f(t)); }, op.p_out);
        out += integrate(s, 0.0, [&](double t) { return Vector(op.R2(s, t) * v.f(t)); }, op.p_out);
        return out;
    };
    return HybridVector::function(xo, op.p_out, g);
}

PIOperator add(const PIOperator& a, const PIOperator& b) {
    a.check();
    b.check();
    if (a.n_out != b.n_out || a.n_in != b.n_in || a.p_out != b.p_out || a.p_in != b.p_in) {
        throw DimensionError("add: operator dimensions differ");
    }
    PIOperator c = a;
    c.P += b.P;
    c.Q1 += b.Q1;
    c.Q2 += b.Q2;
    c.R0 += b.R0;
    c.R1 += b.R1;
    c.R2 += b.R2;
    return c;
}

PIOperator scale(const PIOperator& a, double alpha) {
    a.check();
    PIOperator c = a;
    c.P *= alpha;
    c.Q1 *= alpha;
    c.Q2 *= alpha;
    c.R0 *= alpha;
    c.R1 *= alpha;
    c.R2 *= alpha;
    return c;
}

PIOperator compose(const PIOperator& a, const PIOperator& b, int max_degree) {
    a.check();
    b.check();
    if (a.n_in != b.n_out || a.p_in != b.p_out) {
        throw DimensionError("compose: inner dimensions differ (" + std::to_string(a.n_in) + ", " +
                             std::to_string(a.p_in) + ") vs (" + std::to_string(b.n_out) + ", " +
                             std::to_string(b.p_out) + ")");
    }
    const Limit m1 = at_value(-1.0);
    const Limit z0 = at_value(0.0);
    const Limit s = at_var(kS);
    const Limit th = at_var(kTheta);

    // Outer operator a in (s, eta); inner operator b in (eta, theta).
    const Poly3 aQ1 = Poly3::from1(a.Q1, kEta);
    const Poly3 aR0 = Poly3::from1(a.R0, kS);
    const Poly3 aR1 = Poly3::from2(a.R1, kS, kEta);
    const Poly3 aR2 = Poly3::from2(a.R2, kS, kEta);
    const Poly3 bQ1 = Poly3::from1(b.Q1, kTheta);
    const Poly3 bQ2 = Poly3::from1(b.Q2, kEta);
    const Poly3 bR1 = Poly3::from2(b.R1, kEta, kTheta);
    const Poly3 bR2 = Poly3::from2(b.R2, kEta, kTheta);

    PIOperator c = PIOperator::zero(a.n_out, b.n_in, a.p_out, b.p_in);

    c.P = a.P * b.P;
    if (a.p_in > 0) c.P += (aQ1 * bQ2).integrate(kEta, m1, z0).constant();

    // Finite row, function column.
    {
        Poly3 q1 = Poly3::from1(a.P * b.Q1, kTheta);
        if (a.p_in > 0) {
            q1 += Poly3::from1(PolyKernel::product(a.Q1, b.R0), kTheta);
            q1 += (aQ1 * bR1).integrate(kEta, th, z0);
            q1 += (aQ1 * bR2).integrate(kEta, m1, th);
        }
        c.Q1 = q1.to1(kTheta);
    }

    // Function row, finite column.
    {
        Poly3 q2 = Poly3::from1(a.Q2 * b.P, kS);
        if (a.p_in > 0) {
            q2 += Poly3::from1(PolyKernel::product(a.R0, b.Q2), kS);
            q2 += (aR1 * bQ2).integrate(kEta, m1, s);
            q2 += (aR2 * bQ2).integrate(kEta, s, z0);
        }
        c.Q2 = q2.to1(kS);
    }

    c.R0 = PolyKernel::product(a.R0, b.R0).trimmed();

    {
        // Terms shared by both triangles.
        const Poly3 outer = Poly3::from1(a.Q2, kS) * bQ1;
        Poly3 r1 = outer;
        Poly3 r2 = outer;
        if (a.p_in > 0) {
            r1 += aR0 * Poly3::from2(b.R1, kS, kTheta);
            r2 += aR0 * Poly3::from2(b.R2, kS, kTheta);
            r1 += Poly3::from2(a.R1, kS, kTheta) * Poly3::from1(b.R0, kTheta);
            r2 += Poly3::from2(a.R2, kS, kTheta) * Poly3::from1(b.R0, kTheta);

            const Poly3 r1r1 = aR1 * bR1;
            const Poly3 r1r2 = aR1 * bR2;
            const Poly3 r2r1 = aR2 * bR1;
            const Poly3 r2r2 = aR2 * bR2;
            // theta < s
            r1 += r1r1.integrate(kEta, th, s);
            r1 += r1r2.integrate(kEta, m1, th);
            r1 += r2r1.integrate(kEta, s, z0);
            // theta > s
            r2 += r1r2.integrate(kEta, m1, s);
            r2 += r2r1.integrate(kEta, th, z0);
            r2 += r2r2.integrate(kEta, s, th);
        }
        c.R1 = r1.to2(kS, kTheta);
        c.R2 = r2.to2(kS, kTheta);
    }

    check_degree(c.Q1, max_degree, "Q1");
    check_degree(c.Q2, max_degree, "Q2");
    check_degree(c.R0, max_degree, "R0");
    check_degree(c.R1, max_degree, "R1");
    check_degree(c.R2, max_degree, "R2");
    return c;
}

}  // namespace delayrep
