#include "mlab/mahler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "mlab/quadrature.hpp"

namespace mlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTrim = 1e-14;

double log_plus(double r) { return r > 1.0 ? std::log(r) : 0.0; }

std::vector<cplx> companion_roots(const std::vector<cplx>& c) {
    const int d = int(c.size()) - 1;
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 1; i < d; ++i) M(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) M(i, d - 1) = -c[size_t(i)] / c[size_t(d)];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, false);
    std::vector<cplx> r{};
    r.resize(size_t(d));
    for (int i = 0; i < d; ++i) r[size_t(i)] = es.eigenvalues()[i];
    return r;
}

cplx horner(const std::vector<cplx>& c, cplx z, cplx* deriv) {
    cplx p = c.back(), dp = 0.0;
    for (int i = int(c.size()) - 2; i >= 0; --i) {
        dp = dp * z + p;
        p = p * z + c[size_t(i)];
    }
    if (deriv) *deriv = dp;
    return p;
}

double residual_scale(const std::vector<cplx>& c, cplx z) {
    double s = 0.0, zp = 1.0;
    const double a = std::max(1.0, std::abs(z));
    for (const auto& ci : c) {
        s += std::abs(ci) * zp;
        zp *= a;
    }
    return s;
}

std::vector<cplx> aberth_roots(const std::vector<cplx>& c) {
    const int d = int(c.size()) - 1;
    double bound = 0.0;
    for (int i = 0; i < d; ++i) bound = std::max(bound, std::abs(c[size_t(i)] / c[size_t(d)]));
    const double radius = std::min(1.0 + bound, std::pow(std::abs(c[0] / c[size_t(d)]), 1.0 / d) + 1.0);
    std::vector<cplx> z{};
    z.resize(size_t(d));
    for (int k = 0; k < d; ++k) z[size_t(k)] = std::polar(radius, 2 * kPi * k / d + 0.4);
    for (int it = 0; it < 100; ++it) {
        double worst = 0.0;
        for (int k = 0; k < d; ++k) {
            cplx dp;
            const cplx p = horner(c, z[size_t(k)], &dp);
            if (p == 0.0) continue;
            const cplx ratio = p / dp;
            cplx s = 0.0;
            for (int j = 0; j < d; ++j)
                if (j != k) s += 1.0 / (z[size_t(k)] - z[size_t(j)]);
            const cplx w = ratio / (1.0 - ratio * s);
            z[size_t(k)] -= w;
            worst = std::max(worst, std::abs(w) / std::max(1.0, std::abs(z[size_t(k)])));
        }
        if (worst < 1e-15) break;
    }
    for (const auto& r : z)
        if (!(std::abs(horner(c, r, nullptr)) <= 1e-10 * residual_scale(c, r))) return companion_roots(c);
    return z;
}

}  // namespace

BudgetExceeded::BudgetExceeded(double best, double err)
    : std::runtime_error("adaptive quadrature budget exceeded (best " + std::to_string(best) + " +- " +
                         std::to_string(err) + ")"),
      best_estimate(best),
      error_estimate(err) {}

std::vector<cplx> polynomial_roots(const std::vector<cplx>& c) {
    const int d = int(c.size()) - 1;
    if (d < 1) return {};
    if (c.back() == 0.0) throw FiberDegenerate("polynomial_roots: zero leading coefficient");
    if (d == 1) return {-c[0] / c[1]};
    std::vector<cplx> r = d <= 4 ? companion_roots(c) : aberth_roots(c);
    // One Newton polish per root.
    for (auto& z : r) {
        cplx dp;
        const cplx p = horner(c, z, &dp);
        if (dp != 0.0) {
            const cplx zn = z - p / dp;
            if (std::abs(horner(c, zn, nullptr)) < std::abs(p)) z = zn;
        }
    }
    return r;
}

FiberEvaluator::FiberEvaluator(const LaurentPoly& P) {
    const int n = P.nvars();
    if (n < 1) throw std::invalid_argument("FiberEvaluator: polynomial has no variables");
    base_dims_ = n - 1;
    const int lo = P.min_degree(n - 1), hi = P.max_degree(n - 1);
    coeffs_.assign(size_t(hi - lo + 1), {});
    min_e_.assign(size_t(base_dims_), 0);
    max_e_.assign(size_t(base_dims_), 0);
    for (int k = 0; k < base_dims_; ++k) {
        min_e_[size_t(k)] = P.min_degree(k);
        max_e_[size_t(k)] = P.max_degree(k);
    }
    for (const auto& [e, c] : P.terms())
        coeffs_[size_t(e.back() - lo)].push_back({std::vector<int>(e.begin(), e.end() - 1), to_double(c)});
}

namespace {

// pw[k][j] = base[k]^(min_k + j)
void fill_powers(const cplx* base, const std::vector<int>& lo, const std::vector<int>& hi,
                 std::vector<std::vector<cplx>>& pw) {
    pw.resize(lo.size());
    for (size_t k = 0; k < lo.size(); ++k) {
        auto& v = pw[k];
        v.assign(size_t(hi[k] - lo[k] + 1), 1.0);
        cplx start = 1.0;
        if (lo[k] >= 0)
            for (int i = 0; i < lo[k]; ++i) start *= base[k];
        else
            for (int i = 0; i < -lo[k]; ++i) start /= base[k];
        v[0] = start;
        for (size_t j = 1; j < v.size(); ++j) v[j] = v[j - 1] * base[k];
    }
}

}  // namespace

void FiberEvaluator::coefficients(const cplx* base, std::vector<cplx>& out) const {
    thread_local std::vector<std::vector<cplx>> pw;
    fill_powers(base, min_e_, max_e_, pw);
    out.assign(coeffs_.size(), 0.0);
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        cplx s = 0.0;
        for (const auto& t : coeffs_[i]) {
            cplx m = t.c;
            for (int k = 0; k < base_dims_; ++k) m *= pw[size_t(k)][size_t(t.e[size_t(k)] - min_e_[size_t(k)])];
            s += m;
        }
        out[i] = s;
    }
}

void FiberEvaluator::coefficient_derivatives(const cplx* base, int var, std::vector<cplx>& out) const {
    thread_local std::vector<std::vector<cplx>> pw;
    fill_powers(base, min_e_, max_e_, pw);
    out.assign(coeffs_.size(), 0.0);
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        cplx s = 0.0;
        for (const auto& t : coeffs_[i]) {
            const int ev = t.e[size_t(var)];
            if (ev == 0) continue;
            cplx m = t.c * double(ev);
            for (int k = 0; k < base_dims_; ++k) m *= pw[size_t(k)][size_t(t.e[size_t(k)] - min_e_[size_t(k)])];
            s += m / base[var];
        }
        out[i] = s;
    }
}

namespace {

// Drop numerically vanishing top coefficients; false if everything vanishes.
bool trim(std::vector<cplx>& c) {
    double scale = 0.0;
    for (const auto& v : c) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return false;
    while (c.size() > 1 && std::abs(c.back()) <= kTrim * scale) c.pop_back();
    return true;
}

}  // namespace

double FiberEvaluator::jensen(const cplx* base) const {
    thread_local std::vector<cplx> c;
    coefficients(base, c);
    if (!trim(c)) return -std::numeric_limits<double>::infinity();
    if (c.size() == 1) return std::log(std::abs(c[0]));
    if (c.size() == 2) return std::log(std::max(std::abs(c[0]), std::abs(c[1])));
    double s = std::log(std::abs(c.back()));
    for (const auto& r : polynomial_roots(c)) s += log_plus(std::abs(r));
    return s;
}

std::vector<cplx> FiberEvaluator::roots(const cplx* base) const {
    std::vector<cplx> c;
    coefficients(base, c);
    if (!trim(c)) return {};
    return polynomial_roots(c);
}

std::vector<cplx> fiber_roots(const LaurentPoly& P, const std::vector<cplx>& base) {
    if (int(base.size()) != P.nvars() - 1) throw std::invalid_argument("fiber_roots: base point dimension");
    FiberEvaluator fe(P);
    std::vector<cplx> c;
    fe.coefficients(base.data(), c);
    double scale = 0.0;
    for (const auto& v : c) scale = std::max(scale, std::abs(v));
    if (c.size() < 2) throw FiberDegenerate("fiber_roots: polynomial is constant in its last variable");
    if (std::abs(c.back()) <= kTrim * scale) throw FiberDegenerate("fiber_roots: leading coefficient vanishes");
    return polynomial_roots(c);
}

std::vector<cplx> fiber_roots(const LaurentPoly& P, cplx x0, cplx y0) { return fiber_roots(P, {x0, y0}); }

namespace {

// Restrict P to the variables it actually depends on.
LaurentPoly drop_unused(const LaurentPoly& P) {
    std::vector<std::string> used;
    for (int i = 0; i < P.nvars(); ++i)
        if (P.depends_on(i)) used.push_back(P.variables()[size_t(i)]);
    return P.normalized().with_variables(used);
}

constexpr int kPanelCap = 4000;

// Univariate polynomials over Q, ascending coefficients.
using QPoly = std::vector<Rational>;

void strip(QPoly& p) {
    while (!p.empty() && p.back() == Rational(0)) p.pop_back();
}

QPoly derivative(const QPoly& p) {
    QPoly d;
    for (size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * Rational(static_cast<long long>(k)));
    strip(d);
    return d;
}

// Quotient and remainder of a by b (b nonzero).
std::pair<QPoly, QPoly> divmod(QPoly a, const QPoly& b) {
    QPoly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Rational(0));
    while (a.size() >= b.size() && !a.empty()) {
        const size_t shift = a.size() - b.size();
        const Rational c = a.back() / b.back();
        q[shift] = c;
        for (size_t k = 0; k < b.size(); ++k) a[shift + k] -= c * b[k];
        a.pop_back();
        strip(a);
    }
    strip(q);
    return {q, a};
}

QPoly monic_gcd(QPoly a, QPoly b) {
    while (!b.empty()) {
        QPoly r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    const Rational lc = a.back();
    for (auto& c : a) c /= lc;
    return a;
}

// m(p) = m(p / g) + m(g) with g = gcd(p, p'): every p / g has simple roots,
// which the eigenvalue solver locates to full precision, while a k-fold root
// would scatter by about eps^(1/k).
double univariate_measure(QPoly p) {
    double s = 0.0;
    while (p.size() > 1) {
        const QPoly g = monic_gcd(p, derivative(p));
        const QPoly q = divmod(p, g).first;
        std::vector<cplx> c;
        for (const auto& a : q) c.emplace_back(to_double(a), 0.0);
        s += std::log(std::abs(c.back()));
        if (c.size() > 1)
            for (const auto& r : polynomial_roots(c)) s += log_plus(std::abs(r));
        p = g;
    }
    return s + std::log(std::abs(to_double(p.at(0))));
}

}  // namespace

MahlerResult mahler_measure(const LaurentPoly& P0, double tol) {
    if (P0.is_zero()) throw std::invalid_argument("mahler_measure: zero polynomial");
    if (!(tol > 0)) throw std::invalid_argument("mahler_measure: tolerance must be positive");
    const LaurentPoly P = drop_unused(P0);
    const int n = P.nvars();
    if (n > 3) throw std::invalid_argument("mahler_measure: more than three variables");
    MahlerResult out;
    if (n == 0) {
        out.value = std::log(std::abs(to_double(P.terms().begin()->second)));
        return out;
    }
    FiberEvaluator fe(P);
    if (n == 1) {
        QPoly c(size_t(P.max_degree(0)) + 1, Rational(0));
        for (const auto& [e, a] : P.terms()) c[size_t(e[0])] = a;
        out.value = univariate_measure(c);
        out.error = 1e-14 * (1.0 + std::abs(out.value));
        out.evaluations = 1;
        return out;
    }
    long evals = 0;
    // Whole-fiber vanishing is a measure-zero event; step off it.
    auto fiber = [&](const cplx* b) {
        ++evals;
        double v = fe.jensen(b);
        for (int k = 1; !std::isfinite(v) && k <= 8; ++k) {
            cplx shifted[2] = {b[0] * std::polar(1.0, 1e-9 * k), n == 3 ? b[1] * std::polar(1.0, 1e-9 * k) : 0.0};
            v = fe.jensen(shifted);
        }
        return v;
    };
    if (n == 2) {
        auto f = [&](double t) {
            const cplx b[1] = {std::polar(1.0, t)};
            return fiber(b);
        };
        QuadResult q = integrate_adaptive(f, -kPi, kPi, tol * 2 * kPi, 0.0, kPanelCap);
        out.value = q.value / (2 * kPi);
        out.error = q.error / (2 * kPi);
        out.evaluations = evals;
        if (!q.converged) throw BudgetExceeded(out.value, out.error);
        return out;
    }
    double inner_worst = 0.0;
    bool inner_failed = false;
    auto inner = [&](double t) {
        const cplx x = std::polar(1.0, t);
        auto g = [&](double s) {
            const cplx b[2] = {x, std::polar(1.0, s)};
            return fiber(b);
        };
        QuadResult q = integrate_adaptive(g, -kPi, kPi, 0.25 * tol * 2 * kPi, 0.0, kPanelCap);
        inner_worst = std::max(inner_worst, q.error / (2 * kPi));
        inner_failed = inner_failed || !q.converged;
        return q.value / (2 * kPi);
    };
    QuadResult q = integrate_adaptive(inner, -kPi, kPi, 0.5 * tol * 2 * kPi, 0.0, kPanelCap);
    out.value = q.value / (2 * kPi);
    out.error = q.error / (2 * kPi) + inner_worst;
    out.evaluations = evals;
    if (!q.converged || inner_failed) throw BudgetExceeded(out.value, out.error);
    return out;
}

LaurentPoly leading_coefficient(const LaurentPoly& P) {
    const int n = P.nvars();
    if (n < 1 || !P.depends_on(n - 1))
        throw std::invalid_argument("leading_coefficient: polynomial has no positive degree in its last variable");
    const auto cs = P.coefficients_in(n - 1);
    std::vector<std::string> rest(P.variables().begin(), P.variables().end() - 1);
    return cs.back().with_variables(rest);
}

MahlerResult leading_coeff_measure(const LaurentPoly& P, double tol) {
    return mahler_measure(leading_coefficient(P), tol);
}

}  // namespace mlab
