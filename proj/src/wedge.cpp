#include "mlab/wedge.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "mlab/forms.hpp"
#include "mlab/mahler.hpp"

namespace mlab {

namespace {

using RVec = std::vector<Rational>;

// Exact division of a by the monic integer polynomial m (ascending); returns
// false and leaves a untouched when the remainder is nonzero.
bool divide_exact(RVec& a, const std::vector<long long>& m) {
    const size_t dm = m.size() - 1;
    if (a.size() < m.size()) return false;
    RVec r = a, q(a.size() - dm, Rational(0));
    for (size_t k = a.size(); k-- > dm;) {
        const Rational c = r[k];
        q[k - dm] = c;
        if (c == Rational(0)) continue;
        for (size_t j = 0; j <= dm; ++j) r[k - dm + j] -= c * Rational(m[j]);
    }
    for (size_t k = 0; k < dm; ++k)
        if (r[k] != Rational(0)) return false;
    a = q;
    return true;
}

RationalExpr xvar() { return RationalExpr::variable(0); }

RationalExpr poly_expr(const std::vector<long long>& c) {
    LaurentPoly p({"x"});
    for (size_t k = 0; k < c.size(); ++k) p.add_term({int(k)}, Rational(c[k]));
    return p.to_expr();
}

}  // namespace

int moebius(int n) {
    if (n < 1) throw std::invalid_argument("moebius: n must be positive");
    int mu = 1;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        mu = -mu;
    }
    return n > 1 ? -mu : mu;
}

std::vector<long long> cyclotomic_polynomial(int n) {
    if (n < 1) throw std::invalid_argument("cyclotomic_polynomial: n must be positive");
    RVec a(size_t(n) + 1, Rational(0));
    a[0] = Rational(-1);
    a[size_t(n)] = Rational(1);
    for (int d = 1; d < n; ++d)
        if (n % d == 0 && !divide_exact(a, cyclotomic_polynomial(d)))
            throw std::logic_error("cyclotomic_polynomial: inexact division");
    std::vector<long long> out;
    for (const auto& c : a) out.push_back(c.numerator());
    return out;
}

CyclotomicFactorization CyclotomicFactorization::factor(const LaurentPoly& A) {
    if (A.is_zero()) throw std::invalid_argument("factor: zero polynomial");
    const LaurentPoly P = A.nvars() == 1 && A.variables()[0] == "x" ? A : A.with_variables({"x"});
    CyclotomicFactorization f;
    f.x_power = P.min_degree(0);
    const int deg = P.max_degree(0) - f.x_power;
    RVec c(size_t(deg) + 1, Rational(0));
    for (const auto& [e, v] : P.terms()) c[size_t(e[0] - f.x_power)] = v;
    for (int n = 1; c.size() > 1 && n <= 2 * deg * deg + 2; ++n) {
        const auto phi = cyclotomic_polynomial(n);
        while (c.size() >= phi.size() && divide_exact(c, phi)) ++f.phi[n];
    }
    if (c.size() > 1) throw std::invalid_argument("factor: " + P.str() + " has a non-cyclotomic factor");
    f.unit = c[0];
    return f;
}

RationalExpr CyclotomicFactorization::expr() const {
    RationalExpr e = RationalExpr::constant(unit);
    if (x_power != 0) e = e * xvar().pow(x_power);
    for (const auto& [n, k] : phi) e = e * poly_expr(cyclotomic_polynomial(n)).pow(k);
    return e;
}

LaurentPoly CyclotomicFactorization::poly(const std::vector<std::string>& variables) const {
    LaurentPoly::Exponents e(variables.size(), 0);
    e[0] = x_power;
    LaurentPoly p = LaurentPoly::monomial(unit, e, variables);
    for (const auto& [n, k] : phi) {
        LaurentPoly q(variables);
        const auto c = cyclotomic_polynomial(n);
        for (size_t j = 0; j < c.size(); ++j) {
            LaurentPoly::Exponents ej(variables.size(), 0);
            ej[0] = int(j);
            q.add_term(ej, Rational(c[j]));
        }
        p = p * q.pow(unsigned(k));
    }
    return p;
}

std::string CyclotomicFactorization::str() const {
    std::ostringstream s;
    s << to_string(unit);
    if (x_power) s << " * x^" << x_power;
    for (const auto& [n, k] : phi) s << " * Phi_" << n << (k != 1 ? "^" + std::to_string(k) : "");
    return s.str();
}

Decomposition cyclotomic_reduction(int n, const RationalExpr& g) {
    int a = 0, m = n;
    while (m % 2 == 0) {
        m /= 2;
        ++a;
    }
    Decomposition d;
    for (int q = 1; q <= m; ++q) {
        if (m % q) continue;
        const int mu = moebius(m / q);
        if (mu == 0) continue;
        if (a == 0) {
            d.add(Rational(mu, q), xvar().pow(q), g);
        } else {
            const int k = (1 << (a - 1)) * q;
            d.add(Rational(mu, k), -xvar().pow(k), g);
        }
    }
    return d;
}

Decomposition cyclotomic_decompose(const CyclotomicFactorization& A, const CyclotomicFactorization& B,
                                   const CyclotomicFactorization& C) {
    if (A.unit == Rational(0) || B.unit == Rational(0) || C.unit == Rational(0))
        throw std::invalid_argument("cyclotomic_decompose: zero coefficient");
    const Rational ac = A.unit / C.unit, ba = B.unit / A.unit;
    if ((ac != Rational(1) && ac != Rational(-1)) || (ba != Rational(1) && ba != Rational(-1)))
        throw std::invalid_argument("cyclotomic_decompose: constant factors other than +-1 do not cancel");
    const RationalExpr x = xvar(), y = RationalExpr::variable(1);
    Decomposition d;
    auto block = [&](const CyclotomicFactorization& F, int sign, const RationalExpr& g) {
        for (const auto& [n, e] : F.phi) {
            for (auto t : cyclotomic_reduction(n, g).terms) {
                t.c *= Rational(sign * e);
                d.terms.push_back(t);
            }
        }
    };
    // x ^ y ^ Phi^e = -e x ^ Phi ^ y
    block(A, -1, y);
    block(C, +1, y);
    // B/A with common cyclotomic factors cancelled
    CyclotomicFactorization num, den;
    num.unit = B.unit / A.unit;
    (B.x_power >= A.x_power ? num.x_power : den.x_power) = std::abs(B.x_power - A.x_power);
    std::map<int, int> diff = B.phi;
    for (const auto& [n, e] : A.phi) diff[n] -= e;
    for (const auto& [n, e] : diff) {
        if (e > 0) num.phi[n] = e;
        if (e < 0) den.phi[n] = -e;
    }
    const RationalExpr ratio = den.phi.empty() && den.x_power == 0 ? num.expr() : num.expr() / den.expr();
    d.add(Rational(1), -(ratio * y), x);
    const RationalExpr h = RationalExpr::constant(Rational(1)) + ratio * y;
    block(num, -1, h);
    block(den, +1, h);
    return d;
}

LinearShape split_linear(const LaurentPoly& P) {
    const LaurentPoly Q = P.variables() == std::vector<std::string>{"x", "y", "z"} ? P : P.with_variables({"x", "y", "z"});
    LinearShape s{LaurentPoly({"x"}), LaurentPoly({"x"}), LaurentPoly({"x"})};
    for (const auto& [e, c] : Q.terms()) {
        if (e[1] == 0 && e[2] == 0)
            s.A.add_term({e[0]}, c);
        else if (e[1] == 1 && e[2] == 0)
            s.B.add_term({e[0]}, c);
        else if (e[1] == 0 && e[2] == 1)
            s.C.add_term({e[0]}, c);
        else
            throw std::invalid_argument("split_linear: P is not of the form A(x) + B(x) y + C(x) z");
    }
    if (s.A.is_zero() || s.B.is_zero() || s.C.is_zero())
        throw std::invalid_argument("split_linear: A, B and C must all be nonzero");
    return s;
}

Decomposition cyclotomic_decompose(const LaurentPoly& P) {
    const LinearShape s = split_linear(P);
    return cyclotomic_decompose(CyclotomicFactorization::factor(s.A), CyclotomicFactorization::factor(s.B),
                                CyclotomicFactorization::factor(s.C));
}

Decomposition tau_pull(const Decomposition& d) {
    const RationalExpr one = RationalExpr::constant(Rational(1));
    const std::vector<RationalExpr> inv = {one / RationalExpr::variable(0), one / RationalExpr::variable(1),
                                           one / RationalExpr::variable(2)};
    Decomposition r;
    for (const auto& t : d.terms) r.add(t.c, t.f.substitute(inv), t.g.substitute(inv));
    return r;
}

Decomposition lambda_of(const Decomposition& d) { return d + tau_pull(d); }

double decomposition_defect(const LaurentPoly& P, const Decomposition& d, int samples, std::uint64_t seed,
                            const std::vector<RationalExpr>& targets) {
    const LaurentPoly Q = P.variables() == std::vector<std::string>{"x", "y", "z"} ? P : P.with_variables({"x", "y", "z"});
    const LaurentPoly Px = Q.derivative(0), Py = Q.derivative(1), Pz = Q.derivative(2);
    std::vector<RationalExpr> tg = targets;
    if (tg.empty()) tg = {RationalExpr::variable(0), RationalExpr::variable(1), RationalExpr::variable(2)};
    if (tg.size() != 3) throw std::invalid_argument("decomposition_defect: three target functions required");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ang(-M_PI, M_PI), rad(0.9, 1.1), gauss(-1.0, 1.0);
    double worst = 0.0;
    int done = 0, attempts = 0;
    while (done < samples) {
        if (++attempts > 20 * samples + 100) throw std::runtime_error("decomposition_defect: too many excluded samples");
        const cplx x = std::polar(rad(rng), ang(rng)), y = std::polar(rad(rng), ang(rng));
        std::vector<cplx> roots;
        try {
            roots = fiber_roots(Q, x, y);
        } catch (const FiberDegenerate&) {
            continue;
        }
        if (roots.empty()) continue;
        const cplx z = roots[size_t(rng() % roots.size())];
        if (!(std::abs(z) > 1e-6 && std::abs(z) < 1e6)) continue;
        const cplx p[3] = {x, y, z};
        const cplx px = Px.eval(p), py = Py.eval(p), pz = Pz.eval(p);
        if (std::abs(pz) < 1e-8) continue;
        TangentSample ts{{x, y, z}, {}};
        for (int k = 0; k < 2; ++k) {
            const cplx a(gauss(rng), gauss(rng)), b(gauss(rng), gauss(rng));
            std::array<cplx, 3> v = {a * pz, b * pz, -(a * px + b * py)};
            const double n = std::sqrt(std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]));
            for (auto& c : v) c /= n;
            ts.tangents.push_back(v);
        }
        try {
            const double lhs = eval_eta(tg[0], tg[1], tg[2], ts);
            const double rhs = eval_eta_sum(d, ts);
            if (!std::isfinite(lhs) || !std::isfinite(rhs)) continue;
            worst = std::max(worst, std::abs(lhs - rhs));
        } catch (const ExcludedPoint&) {
            continue;
        }
        ++done;
    }
    return worst;
}

DecompositionFile parse_decomposition_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    DecompositionFile f;
    f.id = j.value("id", "");
    f.polynomial = j.at("polynomial").get<std::string>();
    f.note = j.value("note", "");
    for (const auto& t : j.at("terms")) {
        f.xi.add(parse_rational(t.at("c").get<std::string>()), RationalExpr::parse(t.at("f").get<std::string>()),
                 RationalExpr::parse(t.at("g").get<std::string>()));
    }
    return f;
}

DecompositionFile load_decomposition(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open decomposition file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_decomposition_json(ss.str());
}

std::string decomposition_json(const DecompositionFile& f) {
    nlohmann::json j;
    j["id"] = f.id;
    j["polynomial"] = f.polynomial;
    if (!f.note.empty()) j["note"] = f.note;
    j["terms"] = nlohmann::json::array();
    for (const auto& t : f.xi.terms) j["terms"].push_back({{"c", to_string(t.c)}, {"f", t.f.str()}, {"g", t.g.str()}});
    return j.dump(2);
}

}  // namespace mlab
