#include "mlab/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "mlab/chains.hpp"
#include "mlab/mahler.hpp"
#include "mlab/poly.hpp"
#include "mlab/registry.hpp"
#include "mlab/specialfn.hpp"

namespace mlab {

namespace {

bool close(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

// Conjugate-friendly ordering: upper half plane first, then by real part.
void sort_embeddings(std::vector<cplx>& v) {
    std::sort(v.begin(), v.end(), [](cplx a, cplx b) {
        if (std::abs(a.imag() - b.imag()) > 1e-9) return a.imag() > b.imag();
        return a.real() > b.real();
    });
}

std::string poly_str(const std::vector<long long>& c) {
    std::ostringstream s;
    bool first = true;
    for (size_t k = c.size(); k-- > 0;) {
        if (c[k] == 0) continue;
        long long a = c[k];
        if (!first) s << (a < 0 ? " - " : " + ");
        else if (a < 0) s << "-";
        a = std::llabs(a);
        if (a != 1 || k == 0) s << a;
        if (k > 0) s << "T" << (k > 1 ? "^" + std::to_string(k) : "");
        first = false;
    }
    return first ? "0" : s.str();
}

cplx horner(const std::vector<long long>& c, cplx v) {
    cplx r = 0.0;
    for (size_t k = c.size(); k-- > 0;) r = r * v + double(c[k]);
    return r;
}

}  // namespace

AlgebraicPoint AlgebraicPoint::rational(const Rational& q) {
    return {{-q.numerator(), q.denominator()}, {cplx(to_double(q), 0.0)}};
}

AlgebraicPoint AlgebraicPoint::from_embeddings(const std::vector<cplx>& values) {
    if (values.empty()) throw std::invalid_argument("from_embeddings: no values");
    AlgebraicPoint p;
    p.embeddings = values;
    std::vector<cplx> distinct;
    for (const auto& v : values)
        if (std::none_of(distinct.begin(), distinct.end(), [&](cplx w) { return close(v, w, 1e-8); }))
            distinct.push_back(v);
    std::vector<cplx> c = {1.0};
    for (const auto& r : distinct) {
        std::vector<cplx> n(c.size() + 1, 0.0);
        for (size_t k = 0; k < c.size(); ++k) {
            n[k + 1] += c[k];
            n[k] -= r * c[k];
        }
        c = n;
    }
    std::vector<Rational> q;
    for (const auto& a : c) {
        const double tol = 1e-8 * std::max(1.0, std::abs(a));
        if (std::abs(a.imag()) > tol) return p;
        const auto r = recover_rational(a.real(), 1000000, tol);
        if (!r) return p;
        q.push_back(*r);
    }
    long long den = 1;
    for (const auto& r : q) den = std::lcm(den, r.denominator());
    long long g = 0;
    for (const auto& r : q) {
        p.minpoly.push_back(r.numerator() * (den / r.denominator()));
        g = std::gcd(g, std::llabs(p.minpoly.back()));
    }
    for (auto& a : p.minpoly) a /= g;
    if (p.minpoly.back() < 0)
        for (auto& a : p.minpoly) a = -a;
    return p;
}

bool AlgebraicPoint::valid() const {
    if (minpoly.size() < 2) return false;
    for (const auto& v : embeddings) {
        double scale = 0.0, pw = 1.0;
        for (const auto& a : minpoly) {
            scale += std::abs(double(a)) * pw;
            pw *= std::max(1.0, std::abs(v));
        }
        if (std::abs(horner(minpoly, v)) > 1e-10 * scale) return false;
    }
    return true;
}

bool AlgebraicPoint::is_real(double tol) const {
    return std::all_of(embeddings.begin(), embeddings.end(),
                       [&](cplx v) { return std::abs(v.imag()) <= tol * std::max(1.0, std::abs(v)); });
}

bool AlgebraicPoint::same_as(const AlgebraicPoint& o, double tol) const {
    if (!minpoly.empty() && !o.minpoly.empty() && minpoly != o.minpoly) return false;
    const AlgebraicPoint& a = embeddings.size() >= o.embeddings.size() ? *this : o;
    const AlgebraicPoint& b = &a == this ? o : *this;
    if (b.embeddings.size() != a.embeddings.size() && b.embeddings.size() != 1) return false;
    for (size_t k = 0; k < a.embeddings.size(); ++k)
        if (!close(a.embeddings[k], b.embeddings[b.embeddings.size() == 1 ? 0 : k], tol)) return false;
    return true;
}

std::string AlgebraicPoint::str() const {
    std::ostringstream s;
    if (minpoly.size() == 2 && minpoly[1] != 0) {
        s << to_string(Rational(-minpoly[0], minpoly[1]));
        return s.str();
    }
    const cplx v = embeddings.empty() ? cplx(0) : embeddings[0];
    s.precision(10);
    s << "root of " << (minpoly.empty() ? std::string("?") : poly_str(minpoly)) << " near " << v.real()
      << (v.imag() < 0 ? " - " : " + ") << std::abs(v.imag()) << "i";
    return s.str();
}

DilogArgument DilogArgument::finite(AlgebraicPoint p) { return {Kind::Finite, std::move(p)}; }
DilogArgument DilogArgument::special(Kind k) { return {k, {}}; }

FormalDilogSum FormalDilogSum::operator+(const FormalDilogSum& o) const {
    FormalDilogSum r = *this;
    r.terms.insert(r.terms.end(), o.terms.begin(), o.terms.end());
    return r;
}

std::string FormalDilogSum::str() const {
    if (terms.empty()) return "0";
    std::ostringstream s;
    for (size_t k = 0; k < terms.size(); ++k) {
        const auto& t = terms[k];
        if (k) s << " + ";
        s << to_string(t.c) << " {";
        switch (t.arg.kind) {
            case DilogArgument::Kind::Zero: s << "0"; break;
            case DilogArgument::Kind::One: s << "1"; break;
            case DilogArgument::Kind::Infinity: s << "inf"; break;
            case DilogArgument::Kind::Finite: s << t.arg.point.str(); break;
        }
        s << "}_2";
    }
    return s.str();
}

FormalDilogSum normalize(const FormalDilogSum& s) {
    FormalDilogSum out;
    for (const auto& t : s.terms) {
        if (t.arg.degenerate() || t.c == Rational(0)) continue;
        auto it = std::find_if(out.terms.begin(), out.terms.end(),
                               [&](const FormalDilogTerm& u) { return u.arg.point.same_as(t.arg.point); });
        if (it == out.terms.end())
            out.terms.push_back(t);
        else
            it->c += t.c;
    }
    out.terms.erase(std::remove_if(out.terms.begin(), out.terms.end(),
                                   [](const FormalDilogTerm& t) { return t.c == Rational(0); }),
                    out.terms.end());
    return out;
}

FormalDilogSum reduce_inversions(const FormalDilogSum& s) {
    FormalDilogSum out;
    for (auto t : s.terms) {
        if (t.arg.degenerate()) continue;
        const cplx a = t.arg.point.embeddings.at(0);
        const double m = std::abs(a);
        if (m < 1.0 - 1e-9 || (std::abs(m - 1.0) <= 1e-9 && a.imag() < -1e-9)) {
            std::vector<cplx> inv;
            for (const auto& v : t.arg.point.embeddings) inv.push_back(1.0 / v);
            t.arg.point = AlgebraicPoint::from_embeddings(inv);
            t.c = -t.c;
        }
        const auto& e = t.arg.point.embeddings;
        if (std::all_of(e.begin(), e.end(), [](cplx v) { return close(v, -1.0, 1e-9); })) continue;
        out.terms.push_back(t);
    }
    return normalize(out);
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Trivial: return "trivial";
        case Verdict::Nontrivial: return "nontrivial";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

DProfile d_profile(const FormalDilogSum& s) {
    DProfile p;
    size_t n = 1;
    for (const auto& t : s.terms) {
        if (t.arg.degenerate()) continue;
        const size_t m = t.arg.point.embeddings.size();
        if (m == 0) throw std::invalid_argument("d_profile: argument without embeddings");
        if (m != 1 && n != 1 && m != n) throw std::invalid_argument("d_profile: incompatible embedding data");
        n = std::max(n, m);
    }
    p.values.assign(n, 0.0);
    bool any = false;
    for (const auto& t : s.terms) {
        if (t.arg.degenerate()) continue;
        any = true;
        const auto& e = t.arg.point.embeddings;
        for (size_t k = 0; k < n; ++k) p.values[k] += to_double(t.c) * bloch_wigner(e[e.size() == 1 ? 0 : k]);
    }
    double worst = 0.0;
    for (double v : p.values) worst = std::max(worst, std::abs(v));
    p.is_numerically_trivial = worst <= 1e-9;
    if (!any)
        p.verdict = Verdict::Trivial;
    else if (!p.is_numerically_trivial)
        p.verdict = Verdict::Nontrivial;
    else
        p.verdict = Verdict::Inconclusive;
    return p;
}

// ---------------------------------------------------------------------------
// Dossiers

const CurveDossier::Point& CurveDossier::point(const std::string& name) const {
    for (const auto& p : points)
        if (p.name == name) return p;
    throw std::invalid_argument("dossier " + curve + " has no point " + name);
}

int CurveDossier::valuation(const std::string& function, const std::string& pt) const {
    point(pt);
    const auto it = divisors.find(function);
    if (it == divisors.end()) throw std::invalid_argument("dossier " + curve + " has no divisor for " + function);
    int v = 0;
    for (const auto& [q, k] : it->second)
        if (q == pt) v += k;
    return v;
}

std::map<std::string, int> CurveDossier::divisor_degrees() const {
    std::map<std::string, int> out;
    for (const auto& [fn, div] : divisors) {
        int s = 0;
        for (const auto& [q, k] : div) s += k * point(q).degree;
        out[fn] = s;
    }
    return out;
}

CurveDossier parse_dossier_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    CurveDossier d;
    d.curve = j.at("curve").get<std::string>();
    d.polynomial = j.at("polynomial").get<std::string>();
    d.model = j.at("model").get<std::string>();
    d.field = j.value("field", "");
    d.x = j.value("x", "");
    d.y = j.value("y", "");
    d.note = j.value("note", "");
    for (const auto& p : j.at("points")) {
        CurveDossier::Point q;
        q.name = p.at("name").get<std::string>();
        q.at_infinity = p.value("infinity", false);
        if (!q.at_infinity) {
            q.U = p.at("U").get<std::string>();
            q.V = p.at("V").get<std::string>();
        }
        q.extension = p.value("extension", "");
        q.degree = p.value("degree", 1);
        d.points.push_back(q);
    }
    for (const auto& [fn, list] : j.at("divisors").items()) {
        auto& div = d.divisors[fn];
        for (const auto& e : list) div.emplace_back(e.at(0).get<std::string>(), e.at(1).get<int>());
    }
    for (const auto& t : j.at("terms")) {
        CurveDossier::Term u;
        u.c = parse_rational(t.at("c").get<std::string>());
        u.f = RationalExpr::parse(t.at("f").get<std::string>());
        u.g = RationalExpr::parse(t.at("g").get<std::string>());
        for (const auto& [k, v] : t.at("g_div").items()) u.g_div[k] = v.get<int>();
        if (t.contains("g_tau_div"))
            for (const auto& [k, v] : t.at("g_tau_div").items()) u.g_tau_div[k] = v.get<int>();
        d.terms.push_back(u);
    }
    for (const auto& p : d.points) d.point(p.name);
    for (const auto& [fn, div] : d.divisors)
        for (const auto& [q, k] : div) d.point(q);
    return d;
}

CurveDossier load_dossier(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dossier " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_dossier_json(ss.str());
}

namespace {

// Variables of dossier coordinate expressions: U, V on the model, a the
// generator of the base field, r a generator for a point's own extension.
struct Compiled {
    std::vector<std::string> names{"U", "V", "a", "r"};
    RationalExpr G, x, y;
    LaurentPoly P;
    bool z_linear = false;
    LaurentPoly P0, P1;
    std::vector<cplx> field_roots{0.0};
};

RationalExpr parse_in(const std::string& text, std::vector<std::string>& names) {
    return RationalExpr::parse(text, names, false);
}

Compiled compile(const CurveDossier& d) {
    Compiled c;
    if (d.x.empty() || d.y.empty())
        throw std::invalid_argument("dossier " + d.curve + " has no map from the model to (x, y)");
    c.G = parse_in(d.model, c.names);
    c.x = parse_in(d.x, c.names);
    c.y = parse_in(d.y, c.names);
    c.P = LaurentPoly::parse(d.polynomial, {"x", "y", "z"});
    const auto co = c.P.coefficients_in(2);
    if (co.size() == 2 && c.P.min_degree(2) == 0) {
        c.z_linear = true;
        c.P0 = co[0];
        c.P1 = co[1];
    }
    if (!d.field.empty()) {
        const LaurentPoly F = LaurentPoly::parse(d.field, {"a"});
        std::vector<cplx> k(size_t(F.max_degree(0)) + 1, 0.0);
        for (const auto& [e, v] : F.terms()) k[size_t(e[0])] += to_double(v);
        c.field_roots = polynomial_roots(k);
        sort_embeddings(c.field_roots);
    }
    return c;
}

struct Embedding {
    cplx a, r;
    bool infinity = false;
    cplx U, V;
};

std::vector<Embedding> point_embeddings(const Compiled& c, const CurveDossier::Point& p) {
    std::vector<Embedding> out;
    std::vector<std::string> names = c.names;
    for (const auto& a : c.field_roots) {
        std::vector<cplx> rs{0.0};
        if (!p.extension.empty()) {
            const LaurentPoly E = LaurentPoly::parse(p.extension, {"r", "a"});
            const auto co = E.coefficients_in(0);
            if (E.min_degree(0) != 0) throw std::invalid_argument("point extension must have a nonzero constant term");
            std::vector<cplx> k;
            for (const auto& q : co) {
                const cplx pt[2] = {1.0, a};
                k.push_back(q.eval(pt));
            }
            rs = polynomial_roots(k);
            sort_embeddings(rs);
        }
        for (const auto& r : rs) {
            Embedding e{a, r, p.at_infinity, 0.0, 0.0};
            if (!p.at_infinity) {
                const cplx pt[4] = {0.0, 0.0, a, r};
                e.U = parse_in(p.U, names).eval(pt);
                e.V = parse_in(p.V, names).eval(pt);
            }
            out.push_back(e);
        }
    }
    return out;
}

// Point of the model at local parameter delta from the embedded point:
// U = U0 + delta or V = V0 + delta (whichever coordinate is a uniformizer),
// and U = delta^-2 at the point at infinity.
class LocalChart {
public:
    LocalChart(const Compiled& c, const Embedding& e) : c_(c), e_(e) {
        if (e.infinity) return;
        const Jet<1> gu = jet(e.U, e.V, 0), gv = jet(e.U, e.V, 1);
        const double scale = std::max({1.0, std::abs(e.U), std::abs(e.V)});
        if (std::abs(gu.v) > 1e-8 * scale * scale * scale)
            throw std::invalid_argument("dossier point does not lie on the model");
        along_u_ = std::abs(gv.d[0]) >= std::abs(gu.d[0]);
        if (std::max(std::abs(gv.d[0]), std::abs(gu.d[0])) < 1e-10)
            throw std::invalid_argument("dossier point is singular on the model");
    }

    std::array<cplx, 2> at(double delta) const {
        if (e_.infinity) {
            const cplx U = 1.0 / (delta * delta);
            return {U, solve(U, 1.0 / (delta * delta * delta), true)};
        }
        if (along_u_) return {e_.U + delta, solve(e_.U + delta, e_.V, true)};
        return {solve(e_.V + delta, e_.U, false), e_.V + delta};
    }

    cplx a() const { return e_.a; }

private:
    Jet<1> jet(cplx U, cplx V, int var) const {
        const cplx pt[4] = {U, V, e_.a, e_.r};
        cplx dir[4] = {0.0, 0.0, 0.0, 0.0};
        dir[var] = 1.0;
        return c_.G.eval_jet<1>(pt, {dir});
    }

    // Newton for the free coordinate given the fixed one.
    cplx solve(cplx fixed, cplx guess, bool fixed_is_u) const {
        cplx w = guess;
        double last = 0.0;
        for (int it = 0; it < 60; ++it) {
            const Jet<1> j = fixed_is_u ? jet(fixed, w, 1) : jet(w, fixed, 0);
            const cplx step = j.v / j.d[0];
            w -= step;
            last = std::abs(step) / std::max(1.0, std::abs(w));
            if (last <= 1e-15) return w;
        }
        // rounding can stall the last digit
        if (last <= 1e-13) return w;
        throw std::runtime_error("local chart: Newton did not converge");
    }

    const Compiled& c_;
    Embedding e_;
    bool along_u_ = true;
};

cplx value_on_chart(const Compiled& c, const LocalChart& ch, const RationalExpr& f, double delta) {
    const auto uv = ch.at(delta);
    const cplx pt[4] = {uv[0], uv[1], ch.a(), 0.0};
    std::array<cplx, 3> xyz = {c.x.eval(pt), c.y.eval(pt), 0.0};
    if (f.max_variable() >= 2) {
        if (!c.z_linear) throw std::invalid_argument("dossier: z is needed but P is not linear in z");
        const cplx p2[3] = {xyz[0], xyz[1], 0.0};
        xyz[2] = -c.P0.eval(p2) / c.P1.eval(p2);
    }
    return f.eval(xyz);
}

constexpr double kStep = 1e-3;

// log2 |f(delta) / f(delta/2)| tends to the valuation with an O(delta) error;
// one Richardson step removes it. Several scales are tried because the
// smallest ones lose digits to cancellation near the point.
int chart_valuation(const Compiled& c, const LocalChart& ch, const RationalExpr& f) {
    auto slope = [&](double h) {
        const double a = std::abs(value_on_chart(c, ch, f, h)), b = std::abs(value_on_chart(c, ch, f, h / 2));
        if (a == 0.0 && b == 0.0) throw std::domain_error("function vanishes identically on the curve");
        return std::log2(a / b);
    };
    double last = 0.0;
    for (double h : {4e-3, 4e-4, 4e-2}) {
        const double m = 2.0 * slope(h / 2) - slope(h);
        const double r = std::round(m);
        if (std::isfinite(m) && std::abs(m - r) < 0.05) return int(r);
        last = m;
    }
    throw std::runtime_error("numeric valuation not close to an integer (" + std::to_string(last) + ")");
}

// Richardson extrapolation of f(delta) -> delta = 0 from four halvings.
cplx chart_limit(const Compiled& c, const LocalChart& ch, const RationalExpr& f) {
    cplx R[4][4];
    for (int k = 0; k < 4; ++k) R[k][0] = value_on_chart(c, ch, f, kStep / double(1 << k));
    for (int j = 1; j < 4; ++j)
        for (int k = j; k < 4; ++k) R[k][j] = (double(1 << j) * R[k][j - 1] - R[k - 1][j - 1]) / double((1 << j) - 1);
    return R[3][3];
}

}  // namespace

DilogArgument dossier_value(const CurveDossier& d, const RationalExpr& f, const std::string& point) {
    const Compiled c = compile(d);
    const auto emb = point_embeddings(c, d.point(point));
    std::vector<cplx> vals;
    int v0 = 0;
    for (size_t k = 0; k < emb.size(); ++k) {
        const LocalChart ch(c, emb[k]);
        const int v = chart_valuation(c, ch, f);
        if (k == 0) v0 = v;
        if (v != v0) throw std::runtime_error("valuation differs between embeddings");
        if (v == 0) vals.push_back(chart_limit(c, ch, f));
    }
    if (v0 > 0) return DilogArgument::special(DilogArgument::Kind::Zero);
    if (v0 < 0) return DilogArgument::special(DilogArgument::Kind::Infinity);
    if (std::all_of(vals.begin(), vals.end(), [](cplx v) { return std::abs(v - 1.0) < 1e-7; }))
        return DilogArgument::special(DilogArgument::Kind::One);
    return DilogArgument::finite(AlgebraicPoint::from_embeddings(vals));
}

int numeric_valuation(const CurveDossier& d, const RationalExpr& f, const std::string& point) {
    const Compiled c = compile(d);
    const auto emb = point_embeddings(c, d.point(point));
    return chart_valuation(c, LocalChart(c, emb.at(0)), f);
}

double dossier_model_residual(const CurveDossier& d, int samples, unsigned seed) {
    const Compiled c = compile(d);
    const LaurentPoly W = maillot_plane_model(c.P);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double worst = 0.0;
    int done = 0;
    for (int attempt = 0; done < samples && attempt < 50 * samples; ++attempt) {
        const cplx a = c.field_roots[size_t(rng() % c.field_roots.size())];
        const cplx U(u(rng), u(rng));
        cplx V(u(rng), u(rng));
        bool ok = false;
        for (int it = 0; it < 100; ++it) {
            const cplx pt[4] = {U, V, a, 0.0};
            const cplx dir[4] = {0.0, 1.0, 0.0, 0.0};
            const Jet<1> j = c.G.eval_jet<1>(pt, {dir});
            const cplx step = j.v / j.d[0];
            V -= step;
            if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(V))) {
                ok = true;
                break;
            }
        }
        if (!ok) continue;
        const cplx pt[4] = {U, V, a, 0.0};
        const cplx xy[2] = {c.x.eval(pt), c.y.eval(pt)};
        if (!std::isfinite(std::abs(xy[0])) || !std::isfinite(std::abs(xy[1]))) continue;
        double scale = 0.0;
        for (const auto& [e, q] : W.terms())
            scale += std::abs(to_double(q)) * std::pow(std::abs(xy[0]), e[0]) * std::pow(std::abs(xy[1]), e[1]);
        worst = std::max(worst, std::abs(W.eval(xy)) / scale);
        ++done;
    }
    if (done < samples) throw std::runtime_error("dossier_model_residual: could not sample the model");
    return worst;
}

FormalDilogSum residue_element(const CurveDossier& d, const std::string& point) {
    d.point(point);
    const RationalExpr one = RationalExpr::constant(Rational(1));
    const std::vector<RationalExpr> inv = {one / RationalExpr::variable(0), one / RationalExpr::variable(1),
                                           one / RationalExpr::variable(2)};
    auto val = [&](const std::map<std::string, int>& factors) {
        int v = 0;
        for (const auto& [fn, e] : factors) v += e * d.valuation(fn, point);
        return v;
    };
    FormalDilogSum s;
    for (const auto& t : d.terms) {
        if (t.g_div.empty()) throw std::invalid_argument("dossier term lacks the divisor of g");
        if (t.g_tau_div.empty()) throw std::invalid_argument("dossier term lacks the divisor of g o tau");
        const int v = val(t.g_div), w = val(t.g_tau_div);
        if (v != 0) s.add(t.c * Rational(v), dossier_value(d, t.f, point));
        if (w != 0) s.add(t.c * Rational(w), dossier_value(d, t.f.substitute(inv), point));
    }
    return normalize(s);
}

std::vector<double> residue_sum_profile(const CurveDossier& d) {
    const Compiled c = compile(d);
    const size_t nb = c.field_roots.size();
    std::vector<double> out(nb, 0.0);
    for (const auto& p : d.points) {
        const DProfile prof = d_profile(residue_element(d, p.name));
        if (prof.values.size() <= 1) {
            // a sum without embeddings of its own contributes once per base embedding
            if (!prof.values.empty())
                for (auto& o : out) o += prof.values[0];
            continue;
        }
        if (prof.values.size() % nb) throw std::runtime_error("residue_sum_profile: embedding count mismatch");
        const size_t per = prof.values.size() / nb;
        for (size_t b = 0; b < nb; ++b)
            for (size_t k = 0; k < per; ++k) out[b] += prof.values[b * per + k];
    }
    return out;
}

}  // namespace mlab
