// Acceptance run: one PASS/FAIL line per criterion, with the measured
// numbers and the wall time. Exit status 1 when any criterion fails.
// Pass --long to include the conductor-225 row in criterion 10.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>

#include "mlab/bloch.hpp"
#include "mlab/chains.hpp"
#include "mlab/forms.hpp"
#include "mlab/mahler.hpp"
#include "mlab/registry.hpp"
#include "mlab/specialfn.hpp"
#include "mlab/wedge.hpp"
#include "support.hpp"

using namespace mlab;
using testsupport::Gen;

namespace {

const std::vector<std::string> XYZ = {"x", "y", "z"};
LaurentPoly poly(const std::string& s) { return LaurentPoly::parse(s, XYZ); }

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void run(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > budget_s) {
        o.pass = false;
        o.detail += "; over the time budget";
    }
    if (!o.pass) ++failures;
    std::printf("%s %2d %s: %s [%.2f s, budget %.0f s]\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs,
                budget_s);
    std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
    char b[128];
    std::snprintf(b, sizeof b, f, a);
    return b;
}

// Counterclockwise circle y = c + r e^{i phi} with x, z fixed.
BoundaryPath y_circle(cplx c, double r, int n) {
    BoundaryPath p;
    p.closed = true;
    p.step = 2.0 * M_PI * r / n;
    for (int k = 0; k < n; ++k) {
        const double phi = 2.0 * M_PI * k / n;
        const cplx e = std::polar(1.0, phi);
        p.samples.push_back({cplx(0.3, 0.2), c + r * e, cplx(0.5, -0.1)});
        p.angles.push_back({0.0, phi, 0.0});
        p.directions.push_back({0.0, 1.0, 0.0});
        p.tangents.push_back({0.0, cplx(0.0, 1.0) * e, 0.0});
        p.arclength.push_back(r * phi);
    }
    p.closing = 2.0 * r * std::sin(M_PI / n);
    return p;
}

Outcome c1() {
    const double a = 3.0 / (2.0 * M_PI) * bloch_wigner(std::polar(1.0, 2.0 * M_PI / 3.0));
    const double b = bloch_wigner(std::polar(1.0, M_PI / 3.0)) / M_PI;
    return {std::abs(a - b) <= 1e-12, fmt("L'(chi_-3,-1) both ways = %.15f", a) + fmt(", difference %.2e", a - b)};
}

Outcome c2() {
    Gen g(2024);
    double worst = 0.0;
    for (int n = 0; n < 1000;) {
        const cplx x = g.disk(10.0), y = g.disk(10.0);
        if (std::abs(x) < 1e-6 || std::abs(y) < 1e-6 || std::abs(1.0 - x) < 1e-6 || std::abs(1.0 - y) < 1e-6 ||
            std::abs(1.0 - x * y) < 1e-6)
            continue;
        worst = std::max(worst, std::abs(five_term_defect(x, y)));
        ++n;
    }
    return {worst <= 1e-12, fmt("max |defect| over 1000 pairs = %.2e", worst)};
}

Outcome character_identity(const char* P, double b, const QuadraticCharacter& chi) {
    const auto m = mahler_measure(poly(P), 1e-9);
    const double rhs = b * dirichlet_lprime_minus1(chi);
    const double rel = std::abs(m.value - rhs) / std::abs(rhs);
    return {rel <= 1e-4, fmt("m = %.12f", m.value) + fmt(" vs %.12f", rhs) + fmt(", relative %.2e", rel)};
}

Outcome c4(const Registry& reg) {
    const double L = lprime_minus1(reg.curve("15a8"));
    const auto m = mahler_measure(poly("(x+1)*(y+1)+z"), 1e-9);
    const double rel = std::abs(m.value + 2.0 * L) / std::abs(m.value);
    return {rel <= 1e-3,
            fmt("m = %.12f", m.value) + fmt(", -2 L'(E_15,-1) = %.12f", -2.0 * L) + fmt(", relative %.2e", rel)};
}

Outcome two_way(const char* text) {
    const auto P = poly(text);
    const auto paths = trace_boundary(P, 0.01);
    const auto b = mahler_via_boundary(P, lambda_of(cyclotomic_decompose(P)), paths);
    const auto m = mahler_measure(P, 1e-9);
    const double d = std::abs(b.value - m.value);
    return {d <= 1e-3, std::string(text) + fmt(": quadrature %.10f", m.value) + fmt(", boundary %.10f", b.value) + ", boundary loops " +
                           std::to_string(paths.size()) + fmt(", difference %.2e", d)};
}

Outcome c6() {
    struct Case {
        const char* f;
        const char* g;
        cplx p;
        int v;
    };
    const cplx w = std::polar(1.0, 2.0 * M_PI / 3.0);
    const Case cases[] = {
        {"(y-2)/(y+1)", "y-1", 1.0, 1},          {"(y-2)/(y+1)", "(y-1)*(y+3)", 1.0, 1},
        {"y", "y-(1/2)", 0.5, 1},                {"y^2+1", "y-1", 1.0, 1},
        {"(y+1)/(y-3)", "(y-2)^2", 2.0, 2},      {"y^2-y+1", "1/(y-2)", 2.0, -1},
        {"(y^2+2)/(y+1)", "y", 0.0, 1},          {"(y+2)/(y-3)", "y^2+y+1", w, 1},
        {"y", "y^2+y+1", w, 1},                  {"2*y+1", "y^2+y+1", std::conj(w), 1},
        {"1/(1-y)", "y^2+y+1", std::conj(w), 1},
    };
    double worst = 0.0, largest = 0.0;
    for (const auto& c : cases) {
        Decomposition d;
        d.add(Rational(1), RationalExpr::parse(c.f), RationalExpr::parse(c.g));
        const double closed = residue_formula(d, {cplx(0.3, 0.2), c.p, cplx(0.5, -0.1)}, {c.v});
        // off the real axis the O(r) term of the loop integral survives, so those loops are smaller
        const double r = c.p.imag() == 0.0 ? 1e-3 : 1e-4;
        const double loop = integrate_rho(y_circle(c.p, r, 4000), d).value;
        worst = std::max(worst, std::abs(loop - closed));
        largest = std::max(largest, std::abs(closed));
    }
    return {worst <= 1e-5, std::to_string(std::size(cases)) + " cases, loop radius 1e-3 (1e-4 off the real axis), max |loop - (-2 pi v D(f(p)))| = " +
                               fmt("%.2e", worst) + fmt(" (largest residue %.3f)", largest)};
}

Outcome c7() {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(testsupport::data_dir() + "/decompositions"))
        if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    bool ok = !files.empty();
    double worst = 0.0, weakest_mutant = 1e300;
    std::ostringstream note;
    int certified = 0;
    for (const auto& f : files) {
        const auto file = load_decomposition(f.string());
        const auto P = poly(file.polynomial);
        const double d = decomposition_defect(P, file.xi, 100, 1);
        if (f.filename() == "45a2-printed.json") {
            // literal transcription of the printed 45a2 list; the sign error is
            // the point of keeping it, the corrected list is 45a2.json
            note << "; printed 45a2 list (sign error) defect " << fmt("%.3g", d);
            continue;
        }
        ++certified;
        worst = std::max(worst, d);
        ok = ok && d <= 1e-8;
        for (size_t k = 0; k < file.xi.size(); ++k) {
            Decomposition m = file.xi;
            m.terms[k].c = -m.terms[k].c;
            const double dm = decomposition_defect(P, m, 100, 1);
            weakest_mutant = std::min(weakest_mutant, dm);
            ok = ok && dm > 1e-2;
        }
    }
    return {ok, std::to_string(certified) + " decompositions, max defect " + fmt("%.2e", worst) +
                    ", smallest sign-flip defect " + fmt("%.3g", weakest_mutant) + note.str()};
}

Outcome c8() {
    std::ostringstream s;
    bool ok = true;
    {
        const auto rep = trace_boundary_report(poly("1+(x+1)*y+(x-1)*z"), 0.01);
        ok = ok && rep.paths.size() == 2;
        s << "1+(x+1)y+(x-1)z: " << rep.paths.size() << " loops";
    }
    {
        const auto P = poly("(x+1)*(y+1)+(x-1)^2*z");
        bool found = false;
        for (const auto& f : detect_singular_boundary(P, trace_boundary(P, 0.01)))
            found = found || (std::abs(f.x - 1.0) <= 1e-3 && std::abs(f.y + 1.0) <= 1e-3);
        ok = ok && found;
        s << "; (x+1)(y+1)+(x-1)^2 z: " << (found ? "flag at (1,-1)" : "no flag at (1,-1)");
    }
    {
        const auto P = poly("x^2+1+(x+1)^2*y+(x-1)^2*z");
        int wind = 0;
        bool found = false;
        for (const auto& p : trace_boundary(P, 0.01)) {
            bool on = true;
            for (const auto& a : p.angles) on = on && std::abs(std::remainder(a[0] - M_PI / 2, 2.0 * M_PI)) <= 1e-8;
            if (!on) continue;
            found = true;
            wind = winding_number(p, RationalExpr::parse("y"));
        }
        ok = ok && found && wind == 1;
        s << "; winding of y on the t = pi/2 circle: " << (found ? std::to_string(wind) : "circle not found");
    }
    return {ok, s.str()};
}

CurveDossier dossier(const std::string& l) { return load_dossier(testsupport::data_dir() + "/dossiers/" + l + ".json"); }

Outcome c9() {
    std::ostringstream s;
    bool ok = true;
    {
        const auto u = reduce_inversions(residue_element(dossier("21a1"), "B"));
        const bool good = u.terms.size() == 1 && u.terms[0].c == Rational(1) &&
                          u.terms[0].arg.point.same_as(AlgebraicPoint::rational(Rational(2))) &&
                          d_profile(u).verdict == Verdict::Inconclusive;
        ok = ok && good;
        s << "21a1 u_B = " << u.str() << " [" << verdict_name(d_profile(u).verdict) << "] " << (good ? "ok" : "MISMATCH");
    }
    {
        const auto d = dossier("45a2");
        const auto u = reduce_inversions(residue_element(d, "A"));
        const cplx a = std::polar(1.0, M_PI / 3.0);
        const auto alpha = AlgebraicPoint::from_embeddings({a, std::conj(a)});
        const bool good = u.terms.size() == 1 && u.terms[0].c == Rational(-1) && u.terms[0].arg.point.same_as(alpha) &&
                          d_profile(u).verdict == Verdict::Nontrivial;
        ok = ok && good;
        s << "; 45a2 u_A = " << u.str() << " [" << verdict_name(d_profile(u).verdict) << "] ";
        if (good)
            s << "ok";
        else
            s << "MISMATCH, expected -{alpha}_2: the transcribed divisor has v_A(1+(x^2-x+1)y) = "
              << d.valuation("1+(x^2-x+1)*y", "A")
              << ", so v_A(g_4){f_4(A)} + v_A(g_5){f_5(A)} = 2{-1} + 2{1/alpha} = -2{alpha}; the expected value "
                 "drops that factor 2, which the neighbouring u_3B = 2{-1} + 2{alpha} keeps";
    }
    {
        const auto u = reduce_inversions(residue_element(dossier("48a1"), "P3"));
        ok = ok && u.empty();
        s << "; 48a1 u_P3 = " << (u.empty() ? "0 ok" : u.str() + " MISMATCH");
    }
    double worst = 0.0;
    int n = 0;
    for (const auto& e : std::filesystem::directory_iterator(testsupport::data_dir() + "/dossiers")) {
        const auto d = load_dossier(e.path().string());
        if (d.x.empty()) continue;  // no coordinate map
        for (double v : residue_sum_profile(d)) worst = std::max(worst, std::abs(v));
        ++n;
    }
    ok = ok && worst <= 1e-8;
    s << "; sum of D(u_q) over " << n << " dossiers: max " << fmt("%.2e", worst);
    return {ok, s.str()};
}

Outcome c10(const Registry& reg, bool with_long) {
    int ran = 0, holding = 0, reproduced = 0, skipped = 0;
    std::ostringstream s, bad;
    for (const auto& spec : reg.identities) {
        if (spec.status == IdentityStatus::Proven || spec.curve.empty()) continue;
        if (spec.long_running && !with_long) {
            ++skipped;
            continue;
        }
        VerifyOptions o;
        o.boundary = false;
        const auto r = verify_identity(reg, spec, o);
        ++ran;
        if (r.verdict != CheckVerdict::Pass) continue;
        ++holding;
        if (r.a_fitted && spec.a && *r.a_fitted == *spec.a)
            ++reproduced;
        else
            bad << " " << spec.id;
        s << " " << spec.id << "=" << (r.a_fitted ? to_string(*r.a_fitted) : "?");
    }
    std::string detail = std::to_string(ran) + " conjectural rows measured, " + std::to_string(holding) +
                         " hold numerically, " + std::to_string(reproduced) + " recover a:" + s.str();
    if (skipped) detail += "; " + std::to_string(skipped) + " long-running row skipped (--long)";
    if (!bad.str().empty()) detail += "; not recovered:" + bad.str();
    return {ran > 0 && reproduced == holding, detail};
}

}  // namespace

int main(int argc, char** argv) {
    bool with_long = false;
    for (int i = 1; i < argc; ++i) with_long = with_long || std::strcmp(argv[i], "--long") == 0;
    const Registry reg = load_registry(testsupport::data_dir());

    run(1, "Dirichlet consistency", 1, c1);
    run(2, "five-term relation", 1, c2);
    run(3, "m(x^2+1+(x+1)^2y+(x-1)^2z) = 2 L'(chi_-4,-1)", 120,
        [] { return character_identity("x^2+1+(x+1)^2*y+(x-1)^2*z", 2.0, QuadraticCharacter::chi_minus4()); });
    run(3, "m(1+(x+1)(x^2+x+1)y+(x+1)^3z) = 3 L'(chi_-3,-1)", 120,
        [] { return character_identity("1+(x+1)*(x^2+x+1)*y+(x+1)^3*z", 3.0, QuadraticCharacter::chi_minus3()); });
    run(4, "m((x+1)(y+1)+z) = -2 L'(E_15,-1)", 600, [&] { return c4(reg); });
    run(5, "two-way Mahler consistency", 300, [] { return two_way("1+(x+1)*y+(x-1)*z"); });
    run(5, "two-way Mahler consistency", 300, [] { return two_way("(x+1)*(y+1)+z"); });
    run(6, "residue duality", 30, c6);
    run(7, "decomposition certification", 60, c7);
    run(8, "geometry regressions", 60, c8);
    run(9, "Bloch residue regressions", 10, c9);
    run(10, "conjectural evidence runs", with_long ? 7200 : 900, [&] { return c10(reg, with_long); });

    std::printf("%d failing criterion line(s)\n", failures);
    return failures ? 1 : 0;
}
