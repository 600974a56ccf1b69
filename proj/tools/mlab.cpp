// mlab: command-line front end to the verification laboratory.
// Exit codes: 0 every verdict PASS, 1 some verdict FAIL, 2 only inconclusive ones.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mlab/bloch.hpp"
#include "mlab/chains.hpp"
#include "mlab/elliptic.hpp"
#include "mlab/forms.hpp"
#include "mlab/mahler.hpp"
#include "mlab/registry.hpp"
#include "mlab/specialfn.hpp"
#include "mlab/wedge.hpp"

using namespace mlab;

namespace {

struct Common {
    double tol = -1.0;
    std::uint64_t seed = 1;
    std::string out;
    std::string registry = "data";
};

int exit_code(bool any_fail, bool any_inconclusive) {
    if (any_fail) return 1;
    return any_inconclusive ? 2 : 0;
}

void emit(const Common& c, const std::string& text) {
    if (c.out.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << "\n";
        return;
    }
    std::ofstream f(c.out);
    if (!f) throw std::runtime_error("cannot write " + c.out);
    f << text;
}

bool wants_json(const Common& c) { return c.out.size() > 5 && c.out.substr(c.out.size() - 5) == ".json"; }

std::string dossier_path(const Common& c, const std::string& name) {
    if (std::filesystem::exists(name)) return name;
    return c.registry + "/dossiers/" + name + ".json";
}

std::string decomposition_path(const Common& c, const std::string& name) {
    if (std::filesystem::exists(name)) return name;
    return c.registry + "/decompositions/" + name;
}

int cmd_mahler(const Common& c, const std::string& poly) {
    const LaurentPoly P = LaurentPoly::parse(poly);
    const double tol = c.tol > 0 ? c.tol : 1e-8;
    const MahlerResult r = mahler_measure(P, tol);
    if (wants_json(c)) {
        emit(c, nlohmann::json{{"polynomial", poly}, {"m", r.value}, {"error", r.error}, {"evaluations", r.evaluations}}.dump(2));
    } else {
        std::ostringstream s;
        s.precision(15);
        s << "m(" << poly << ") = " << r.value << " +- " << r.error << " (" << r.evaluations << " fiber evaluations)\n";
        emit(c, s.str());
    }
    return 0;
}

int cmd_lvalue(const Common& c, const std::string& curve, int chi) {
    std::ostringstream s;
    s.precision(15);
    nlohmann::json j;
    if (chi != 0) {
        if (chi != 3 && chi != 4) throw std::invalid_argument("--chi must be 3 or 4");
        const double L = dirichlet_lprime_minus1(chi == 3 ? QuadraticCharacter::chi_minus3() : QuadraticCharacter::chi_minus4());
        s << "L'(chi_-" << chi << ",-1) = " << L << "\n";
        j["chi_" + std::to_string(chi)] = L;
    }
    if (!curve.empty()) {
        const Registry reg = load_registry(c.registry);
        const WeierstrassCurve& E = reg.curve(curve);
        const double L = lprime_minus1(E);
        s << "L'(E_" << curve << ",-1) = " << L << "  (functional-equation residual "
          << functional_equation_defect(E) << ")\n";
        j[curve] = L;
    }
    if (chi == 0 && curve.empty()) throw std::invalid_argument("give --curve or --chi");
    emit(c, wants_json(c) ? j.dump(2) : s.str());
    return 0;
}

int cmd_trace(const Common& c, const std::string& poly, double step) {
    const LaurentPoly P = LaurentPoly::parse(poly, {"x", "y", "z"});
    const TraceReport tr = trace_boundary_report(P, step);
    const auto flags = detect_singular_boundary(P, tr.paths);
    std::ostringstream s;
    if (!c.out.empty() && !wants_json(c)) {
        write_paths_csv(s, tr.paths);
        emit(c, s.str());
        s.str("");
    }
    s << tr.paths.size() << " boundary loop(s)\n";
    for (size_t k = 0; k < tr.paths.size(); ++k) {
        const auto& p = tr.paths[k];
        s << "  loop " << k << ": " << p.size() << " samples, length " << p.length() << (p.closed ? ", closed" : ", open")
          << ", winding in y " << winding_number(p, RationalExpr::variable(1)) << "\n";
    }
    for (const auto& f : flags)
        s << "  singular point (" << f.x.real() << (f.x.imag() < 0 ? "" : "+") << f.x.imag() << "i, " << f.y.real()
          << (f.y.imag() < 0 ? "" : "+") << f.y.imag() << "i) on loop " << f.path << "\n";
    for (const auto& w : tr.warnings) s << "  warning: " << w << "\n";
    std::cout << s.str();
    return tr.warnings.empty() ? 0 : 2;
}

int cmd_decompose(const Common& c, const std::string& poly, const std::string& file, int samples) {
    DecompositionFile f;
    if (!file.empty()) {
        f = load_decomposition(decomposition_path(c, file));
    } else {
        if (poly.empty()) throw std::invalid_argument("give --poly or --file");
        f.polynomial = poly;
        f.xi = cyclotomic_decompose(LaurentPoly::parse(poly, {"x", "y", "z"}));
    }
    const LaurentPoly P = LaurentPoly::parse(f.polynomial, {"x", "y", "z"});
    const double defect = decomposition_defect(P, f.xi, samples, c.seed);
    const double tol = c.tol > 0 ? c.tol : 1e-8;
    const bool pass = defect <= tol;
    if (wants_json(c)) {
        nlohmann::json j = nlohmann::json::parse(decomposition_json(f));
        j["defect"] = defect;
        j["verdict"] = pass ? "PASS" : "FAIL";
        emit(c, j.dump(2));
    } else {
        std::ostringstream s;
        s << "x ^ y ^ z on V_P for P = " << f.polynomial << ":\n" << f.xi.str();
        s << "defect over " << samples << " samples: " << defect << " -> " << (pass ? "PASS" : "FAIL") << "\n";
        emit(c, s.str());
    }
    return pass ? 0 : 1;
}

int cmd_residues(const Common& c, const std::string& name, const std::string& point) {
    const CurveDossier d = load_dossier(dossier_path(c, name));
    std::ostringstream s;
    bool fail = false;
    for (const auto& [fn, deg] : d.divisor_degrees()) {
        if (deg != 0) {
            s << "divisor of " << fn << " has degree " << deg << " -> FAIL\n";
            fail = true;
        }
    }
    if (d.x.empty()) {
        s << d.curve << ": no coordinate map, residues unavailable\n";
        std::cout << s.str();
        return exit_code(fail, true);
    }
    for (const auto& p : d.points) {
        if (!point.empty() && p.name != point) continue;
        const FormalDilogSum u = reduce_inversions(residue_element(d, p.name));
        const DProfile prof = d_profile(u);
        s << "u_" << p.name << " = " << u.str() << "  [" << verdict_name(prof.verdict) << "]\n";
    }
    if (point.empty()) {
        double worst = 0.0;
        for (double v : residue_sum_profile(d)) worst = std::max(worst, std::abs(v));
        const bool ok = worst <= 1e-8;
        s << "sum of D(u_q) over the points: " << worst << " -> " << (ok ? "PASS" : "FAIL") << "\n";
        fail = fail || !ok;
    }
    emit(c, s.str());
    return fail ? 1 : 0;
}

int cmd_verify(const Common& c, const std::string& id, bool all, bool long_running, bool boundary) {
    const Registry reg = load_registry(c.registry);
    VerifyOptions opt;
    opt.tol = c.tol;
    opt.boundary = boundary;
    bool fail = false, inconclusive = false;
    nlohmann::json arr = nlohmann::json::array();
    std::ostringstream s;
    for (const auto& spec : reg.identities) {
        if (!all && spec.id != id) continue;
        if (all && spec.long_running && !long_running) {
            s << spec.id << ": skipped (long-running; pass --long)\n";
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        const VerificationReport r = verify_identity(reg, spec, opt);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        s << r.str() << "  (" << status_name(spec.status) << ", " << secs << " s)\n";
        arr.push_back(nlohmann::json::parse(r.json()));
        fail = fail || r.verdict == CheckVerdict::Fail;
        inconclusive = inconclusive || r.verdict == CheckVerdict::Inconclusive;
    }
    if (!all) reg.identity(id);
    if (wants_json(c))
        emit(c, arr.dump(2));
    else
        emit(c, s.str());
    if (wants_json(c)) std::cout << s.str();
    return exit_code(fail, inconclusive);
}

int cmd_plot(const Common& c, const std::string& poly, int resolution, double step) {
    const LaurentPoly P = LaurentPoly::parse(poly, {"x", "y", "z"});
    const RegionMask mask = deninger_region(P, resolution);
    const auto paths = trace_boundary(P, step);
    std::ostringstream s;
    write_region_svg(s, mask, paths);
    Common cc = c;
    if (cc.out.empty()) cc.out = "region.svg";
    emit(cc, s.str());
    std::cout << "wrote " << cc.out << " (" << paths.size() << " loop(s))\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mlab: Mahler measure verification laboratory"};
    app.require_subcommand(1);
    app.fallthrough();
    Common c;
    app.add_option("--tol", c.tol, "tolerance (meaning depends on the subcommand)");
    app.add_option("--seed", c.seed, "random seed");
    app.add_option("--out", c.out, "output file (.json for JSON, .csv/.svg otherwise)");
    app.add_option("--registry", c.registry, "data directory with curves.json, identities.json, dossiers/, decompositions/");

    std::string poly, curve, file, id, dossier, point;
    int chi = 0, samples = 100, resolution = 256;
    double step = 0.01;
    bool all = false, long_running = false, no_boundary = false;

    auto* mahler = app.add_subcommand("mahler", "logarithmic Mahler measure of a polynomial");
    mahler->add_option("poly", poly, "polynomial, e.g. (x+1)*(y+1)+z")->required();

    auto* lvalue = app.add_subcommand("lvalue", "L'(E,-1) for a registry curve or L'(chi,-1)");
    lvalue->add_option("--curve", curve, "registry curve label");
    lvalue->add_option("--chi", chi, "3 or 4 for chi_-3 or chi_-4");

    auto* trace = app.add_subcommand("trace-boundary", "trace the boundary of the Deninger chain");
    trace->add_option("poly", poly, "polynomial in x, y, z")->required();
    trace->add_option("--step", step, "continuation step in angle space");

    auto* decompose = app.add_subcommand("decompose", "cyclotomic decomposition or certification of a stored one");
    decompose->add_option("--poly", poly, "polynomial A(x) + B(x) y + C(x) z");
    decompose->add_option("--file", file, "decomposition file (path or name under decompositions/)");
    decompose->add_option("--samples", samples, "number of sample points on V_P");

    auto* residues = app.add_subcommand("residues", "residue elements u_p from a curve dossier");
    residues->add_option("dossier", dossier, "dossier name (e.g. 21a1) or path")->required();
    residues->add_option("--point", point, "a single point");

    auto* verify = app.add_subcommand("verify-identity", "measure both sides of a registry identity");
    verify->add_option("--id", id, "identity id, e.g. t3-row6");
    verify->add_flag("--all", all, "every identity in the registry");
    verify->add_flag("--long", long_running, "include long-running identities");
    verify->add_flag("--no-boundary", no_boundary, "skip boundary diagnostics");

    auto* plot = app.add_subcommand("plot", "SVG of the Deninger chain and its boundary");
    plot->add_option("poly", poly, "polynomial in x, y, z")->required();
    plot->add_option("--resolution", resolution, "grid cells per side");
    plot->add_option("--step", step, "continuation step");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*mahler) return cmd_mahler(c, poly);
        if (*lvalue) return cmd_lvalue(c, curve, chi);
        if (*trace) return cmd_trace(c, poly, step);
        if (*decompose) return cmd_decompose(c, poly, file, samples);
        if (*residues) return cmd_residues(c, dossier, point);
        if (*verify) {
            if (id.empty() && !all) throw std::invalid_argument("give --id or --all");
            return cmd_verify(c, id, all, long_running, !no_boundary);
        }
        if (*plot) return cmd_plot(c, poly, resolution, step);
    } catch (const std::exception& e) {
        std::cerr << "mlab: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
