#include "mlab/registry.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "mlab/chains.hpp"
#include "mlab/mahler.hpp"
#include "mlab/poly.hpp"
#include "mlab/specialfn.hpp"

namespace mlab {

std::optional<Rational> recover_rational(double v, long long max_den, double tol) {
    if (!std::isfinite(v) || max_den < 1) return std::nullopt;
    if (tol <= 0.0) tol = 1e-4 * std::max(1.0, std::abs(v));
    // convergents h/k of the continued fraction of v
    long long h0 = 1, h1 = 0, k0 = 0, k1 = 1;
    double x = v;
    for (int it = 0; it < 64; ++it) {
        const double fl = std::floor(x);
        if (std::abs(fl) > 9e15) break;
        const long long a = (long long)fl;
        const long long h = a * h0 + h1, k = a * k0 + k1;
        if (k > max_den) break;
        h1 = h0;
        h0 = h;
        k1 = k0;
        k0 = k;
        if (std::abs(v - double(h) / double(k)) <= tol) return Rational(h, k);
        const double frac = x - fl;
        if (frac < 1e-300) break;
        x = 1.0 / frac;
    }
    return std::nullopt;
}

const char* status_name(IdentityStatus s) {
    switch (s) {
        case IdentityStatus::Proven: return "proven";
        case IdentityStatus::Conjectural: return "conjectural";
        case IdentityStatus::TheoremInapplicable: return "theorem-inapplicable";
    }
    return "?";
}

IdentityStatus parse_status(const std::string& s) {
    if (s == "proven") return IdentityStatus::Proven;
    if (s == "conjectural") return IdentityStatus::Conjectural;
    if (s == "theorem-inapplicable") return IdentityStatus::TheoremInapplicable;
    throw std::invalid_argument("unknown identity status " + s);
}

const char* check_name(CheckVerdict v) {
    switch (v) {
        case CheckVerdict::Pass: return "PASS";
        case CheckVerdict::Fail: return "FAIL";
        case CheckVerdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

const WeierstrassCurve& Registry::curve(const std::string& label) const {
    for (const auto& c : curves)
        if (c.label == label) return c;
    throw std::invalid_argument("registry has no curve " + label);
}

const IdentitySpec& Registry::identity(const std::string& id) const {
    for (const auto& s : identities)
        if (s.id == id) return s;
    throw std::invalid_argument("registry has no identity " + id);
}

namespace {

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return nlohmann::json::parse(in);
}

}  // namespace

Registry load_registry(const std::string& dir) {
    Registry r;
    r.dir = dir;
    for (const auto& c : read_json(dir + "/curves.json")) {
        WeierstrassCurve E;
        E.label = c.at("label").get<std::string>();
        const auto a = c.at("a").get<std::vector<std::int64_t>>();
        if (a.size() != 5) throw std::invalid_argument("curve " + E.label + ": five coefficients expected");
        E.a1 = a[0];
        E.a2 = a[1];
        E.a3 = a[2];
        E.a4 = a[3];
        E.a6 = a[4];
        E.conductor = c.at("conductor").get<std::int64_t>();
        if (c.contains("root_number")) E.root_number = c.at("root_number").get<int>();
        E.note = c.value("note", "");
        E.validate();
        r.curves.push_back(E);
    }
    for (const auto& j : read_json(dir + "/identities.json")) {
        IdentitySpec s;
        s.id = j.at("id").get<std::string>();
        s.table = j.at("table").get<std::string>();
        s.row = j.at("row").get<int>();
        s.polynomial = j.at("polynomial").get<std::string>();
        s.printed = j.value("printed", s.polynomial);
        s.curve = j.value("curve", "");
        if (j.contains("a")) s.a = parse_rational(j.at("a").get<std::string>());
        if (j.contains("characters"))
            for (const auto& [mod, b] : j.at("characters").items())
                s.characters.push_back({std::stoi(mod), parse_rational(b.get<std::string>())});
        s.status = parse_status(j.at("status").get<std::string>());
        s.tol = j.value("tol", 1e-4);
        s.long_running = j.value("long_running", false);
        s.decomposition = j.value("decomposition", "");
        s.note = j.value("note", "");
        if (!s.has_rhs()) throw std::invalid_argument("identity " + s.id + " has no right-hand side");
        if (!s.curve.empty()) r.curve(s.curve);
        for (const auto& ch : s.characters)
            if (ch.modulus != 3 && ch.modulus != 4)
                throw std::invalid_argument("identity " + s.id + ": only chi_-3 and chi_-4 are supported");
        r.identities.push_back(s);
    }
    return r;
}

VerificationReport verify_identity(const Registry& reg, const IdentitySpec& spec, const VerifyOptions& opt) {
    VerificationReport rep;
    rep.id = spec.id;
    rep.tol = opt.tol > 0 ? opt.tol : spec.tol;
    const LaurentPoly P = LaurentPoly::parse(spec.polynomial, {"x", "y", "z"});

    const MahlerResult m = mahler_measure(P, opt.mahler_tol);
    rep.m = m.value;
    rep.m_error = m.error;
    const MahlerResult mt = leading_coeff_measure(P, opt.mahler_tol);
    rep.m_tilde = mt.value;
    rep.m_tilde_error = mt.error;

    double chi_part = 0.0;
    for (const auto& ch : spec.characters) {
        const double L = dirichlet_lprime_minus1(ch.modulus == 3 ? QuadraticCharacter::chi_minus3()
                                                                 : QuadraticCharacter::chi_minus4());
        rep.lprime_chi.emplace_back(ch.modulus, L);
        chi_part += to_double(ch.b) * L;
    }
    const double rest = rep.m - rep.m_tilde - chi_part;
    rep.residual = rest;
    if (!spec.curve.empty()) {
        const double L = lprime_minus1(reg.curve(spec.curve));
        rep.lprime_curve = L;
        rep.a_ratio = rest / L;
        rep.a_fitted = recover_rational(rep.a_ratio, 1000);
        if (spec.a) rep.residual = rest - to_double(*spec.a) * L;
    }
    rep.scale = std::max(std::abs(rep.m), 1e-12);

    if (spec.curve.empty() || spec.a) {
        rep.verdict = std::abs(rep.residual) <= rep.tol * rep.scale ? CheckVerdict::Pass : CheckVerdict::Fail;
        if (rep.m_error + rep.m_tilde_error > rep.tol * rep.scale)
            rep.warnings.push_back("quadrature error exceeds the tolerance budget");
    } else {
        rep.verdict = CheckVerdict::Inconclusive;
    }

    if (opt.boundary && P.max_degree(2) == 1 && P.min_degree(2) == 0) {
        try {
            const TraceReport tr = trace_boundary_report(P, opt.step);
            rep.loops = int(tr.paths.size());
            for (const auto& w : tr.warnings) rep.warnings.push_back(w);
            for (const auto& f : detect_singular_boundary(P, tr.paths)) rep.singular.emplace_back(f.x, f.y);
        } catch (const std::exception& e) {
            rep.warnings.push_back(std::string("boundary diagnostics failed: ") + e.what());
        }
    }
    return rep;
}

namespace {

std::string fmt(double v, int prec = 12) {
    std::ostringstream s;
    s.precision(prec);
    s << v;
    return s.str();
}

std::string fmt(cplx v) {
    std::ostringstream s;
    s.precision(6);
    s << "(" << v.real() << (v.imag() < 0 ? "-" : "+") << std::abs(v.imag()) << "i)";
    return s.str();
}

}  // namespace

std::string VerificationReport::str() const {
    std::ostringstream s;
    s << id << ": " << check_name(verdict) << "\n";
    s << "  m(P)    = " << fmt(m) << " +- " << fmt(m_error, 2) << "\n";
    s << "  m(P~)   = " << fmt(m_tilde) << " +- " << fmt(m_tilde_error, 2) << "\n";
    if (lprime_curve) s << "  L'(E,-1) = " << fmt(*lprime_curve) << "\n";
    for (const auto& [f, L] : lprime_chi) s << "  L'(chi_-" << f << ",-1) = " << fmt(L) << "\n";
    if (lprime_curve)
        s << "  fitted a = " << (a_fitted ? to_string(*a_fitted) : std::string("none")) << " (ratio " << fmt(a_ratio, 10)
          << ")\n";
    s << "  residual = " << fmt(residual, 3) << " (tol " << fmt(tol, 3) << " x " << fmt(scale, 6) << ")\n";
    if (loops >= 0) {
        s << "  boundary loops = " << loops << ", singular points:";
        if (singular.empty()) s << " none";
        for (const auto& [x, y] : singular) s << " " << fmt(x) << "," << fmt(y);
        s << "\n";
    }
    for (const auto& w : warnings) s << "  warning: " << w << "\n";
    return s.str();
}

std::string VerificationReport::json() const {
    nlohmann::json j;
    j["id"] = id;
    j["verdict"] = check_name(verdict);
    j["m"] = {{"value", m}, {"error", m_error}};
    j["m_tilde"] = {{"value", m_tilde}, {"error", m_tilde_error}};
    if (lprime_curve) j["lprime_curve"] = *lprime_curve;
    for (const auto& [f, L] : lprime_chi) j["lprime_chi"][std::to_string(f)] = L;
    if (lprime_curve) {
        j["a_ratio"] = a_ratio;
        j["a_fitted"] = a_fitted ? to_string(*a_fitted) : "";
    }
    j["residual"] = residual;
    j["scale"] = scale;
    j["tol"] = tol;
    j["loops"] = loops;
    j["singular"] = nlohmann::json::array();
    for (const auto& [x, y] : singular)
        j["singular"].push_back({{"x", {x.real(), x.imag()}}, {"y", {y.real(), y.imag()}}});
    j["warnings"] = warnings;
    return j.dump(2);
}

}  // namespace mlab
