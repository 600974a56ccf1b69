#include <cmath>
#include <sstream>

#include "doctest.h"
#include "mlab/chains.hpp"
#include "mlab/mahler.hpp"
#include "support.hpp"

using namespace mlab;
using testsupport::Gen;

namespace {

const std::vector<std::string> XYZ = {"x", "y", "z"};

LaurentPoly poly(const std::string& s) { return LaurentPoly::parse(s, XYZ); }

double dist3(const std::array<cplx, 3>& a, const std::array<cplx, 3>& b) {
    return std::sqrt(std::norm(a[0] - b[0]) + std::norm(a[1] - b[1]) + std::norm(a[2] - b[2]));
}

double nearest_sample(const std::vector<BoundaryPath>& paths, const std::array<cplx, 3>& q) {
    double best = 1e300;
    for (const auto& p : paths)
        for (const auto& s : p.samples) best = std::min(best, dist3(s, q));
    return best;
}

// Distance on the (t, s) torus from (t, s) to the nearest traced sample.
double torus_distance(const std::vector<BoundaryPath>& paths, double t, double s) {
    double best = 1e300;
    for (const auto& p : paths)
        for (const auto& a : p.angles) {
            const double dt = std::remainder(a[0] - t, 2.0 * M_PI), ds = std::remainder(a[1] - s, 2.0 * M_PI);
            best = std::min(best, std::hypot(dt, ds));
        }
    return best;
}

void check_path_invariants(const LaurentPoly& P, const std::vector<BoundaryPath>& paths, double step) {
    for (const auto& p : paths) {
        REQUIRE(p.size() > 3);
        CHECK(p.closed);
        for (size_t k = 0; k < p.size(); ++k) {
            const auto& s = p.samples[k];
            for (int c = 0; c < 3; ++c) REQUIRE(std::abs(std::abs(s[c]) - 1.0) <= 1e-9);
            REQUIRE(std::abs(P.eval(s.data())) <= 1e-9 * std::max(1.0, P.coefficient_scale()));
            if (k > 0) {
                double d = 0.0;
                for (int c = 0; c < 3; ++c) d += std::pow(p.angles[k][c] - p.angles[k - 1][c], 2);
                REQUIRE(std::sqrt(d) <= 1.5 * step);
            }
        }
        CHECK(p.closing <= 1.5 * step);
        CHECK(dist3(p.samples.front(), p.samples.back()) <= 1.5 * step);
    }
}

}  // namespace

TEST_SUITE("chains") {

TEST_CASE("region masks") {
    const auto full = deninger_region(poly("z-2"), 32);
    CHECK(full.cells.size() == 32u * 32u);
    CHECK(full.count() == 32 * 32);
    CHECK(deninger_region(poly("2*z-1"), 32).count() == 0);
    CHECK_THROWS(deninger_region(poly("1+x+y"), 16));
    // 1+(x+1)y+(x-1)z: every horizontal line s = const crosses the boundary twice
    const auto m = deninger_region(poly("1+(x+1)*y+(x-1)*z"), 128);
    for (int j = 0; j < 128; ++j) {
        int flips = 0;
        for (int i = 0; i < 128; ++i) flips += m.at(i, j) != m.at((i + 1) % 128, j);
        CHECK(flips == 2);
    }
}

TEST_CASE("two loops for 1+(x+1)y+(x-1)z") {
    const auto P = poly("1+(x+1)*y+(x-1)*z");
    const auto rep = trace_boundary_report(P, 0.01);
    CHECK(rep.warnings.empty());
    REQUIRE(rep.paths.size() == 2);
    check_path_invariants(P, rep.paths, 0.01);
    // each loop winds once around the s-circle, in opposite directions
    const int w0 = winding_number(rep.paths[0], RationalExpr::parse("y"));
    const int w1 = winding_number(rep.paths[1], RationalExpr::parse("y"));
    CHECK(std::abs(w0) == 1);
    CHECK(w0 + w1 == 0);
}

TEST_CASE("no boundary when |z| is never 1") {
    CHECK(trace_boundary(poly("z-2"), 0.01).empty());
    CHECK_THROWS(trace_boundary(poly("z-2"), 0.0));
    CHECK_THROWS(trace_boundary(poly("1+x"), 0.01));
}

TEST_CASE("circles t = +-pi/2 for x^2+1+(x+1)^2 y+(x-1)^2 z") {
    const auto P = poly("x^2+1+(x+1)^2*y+(x-1)^2*z");
    const auto paths = trace_boundary(P, 0.01);
    check_path_invariants(P, paths, 0.01);
    int found = 0;
    for (const auto& p : paths) {
        for (double t0 : {M_PI / 2, -M_PI / 2}) {
            bool on = true;
            for (const auto& a : p.angles) on = on && std::abs(std::remainder(a[0] - t0, 2.0 * M_PI)) <= 1e-8;
            if (!on) continue;
            ++found;
            const int w = winding_number(p, RationalExpr::parse("y"));
            CHECK(std::abs(w) == 1);
            // the t = +pi/2 circle is traversed with s increasing
            if (t0 > 0) CHECK(w == 1);
            // x^2 + 1 vanishes on the whole circle
            CHECK_THROWS_AS(winding_number(p, RationalExpr::parse("x^2+1")), WindingError);
        }
    }
    CHECK(found == 2);
}

TEST_CASE("winding numbers") {
    const auto paths = trace_boundary(poly("1+(x+1)*y+(x-1)*z"), 0.01);
    REQUIRE(!paths.empty());
    const auto& p = paths[0];
    CHECK(winding_number(p, RationalExpr::parse("3")) == 0);
    const int w = winding_number(p, RationalExpr::parse("y*z/x"));
    CHECK(winding_number(p, RationalExpr::parse("x/(y*z)")) == -w);
    CHECK(winding_number(p.reversed(), RationalExpr::parse("y")) == -winding_number(p, RationalExpr::parse("y")));
    CHECK_THROWS_AS(winding_number(p, RationalExpr::parse("y - y")), WindingError);
}

TEST_CASE("singular points on the boundary") {
    auto near = [](const std::vector<SingularFlag>& flags, cplx x, cplx y) {
        for (const auto& f : flags)
            if (std::abs(f.x - x) <= 1e-3 && std::abs(f.y - y) <= 1e-3) return true;
        return false;
    };
    {
        const auto P = poly("(x+1)*(y+1)+(x-1)^2*z");
        const auto flags = detect_singular_boundary(P, trace_boundary(P, 0.01));
        CHECK(near(flags, 1.0, -1.0));
    }
    {
        const auto P = poly("x^2+x+1+(x^2+x+1)*y+(x-1)^2*z");
        const auto flags = detect_singular_boundary(P, trace_boundary(P, 0.01));
        CHECK(near(flags, 1.0, -1.0));
    }
    {
        const auto P = poly("(x+1)*(y+1)+z");
        CHECK(detect_singular_boundary(P, trace_boundary(P, 0.01)).empty());
    }
}

TEST_CASE("plane model vanishes along the boundary") {
    const auto P = poly("1+(x+1)*y+(x-1)*z");
    const auto F = maillot_plane_model(P);
    CHECK(F.min_degree(0) >= 0);
    CHECK(F.min_degree(1) >= 0);
    for (const auto& p : trace_boundary(P, 0.02))
        for (const auto& s : p.samples) {
            const cplx xy[2] = {s[0], s[1]};
            REQUIRE(std::abs(F.eval(xy)) <= 1e-8 * F.coefficient_scale());
        }
}

TEST_CASE("tau maps the boundary onto itself") {
    for (const char* s : {"1+(x+1)*y+(x-1)*z", "(x+1)*(y+1)+z", "(1+x)*(1+y)*(x+y)+z"}) {
        CAPTURE(s);
        const auto P = poly(s);
        const double step = 0.01;
        const auto paths = trace_boundary(P, step);
        REQUIRE(!paths.empty());
        check_path_invariants(P, paths, step);
        double worst = 0.0;
        for (const auto& p : paths)
            for (size_t k = 0; k < p.size(); k += 7) {
                const auto& q = p.samples[k];
                worst = std::max(worst, nearest_sample(paths, {std::conj(q[0]), std::conj(q[1]), std::conj(q[2])}));
            }
        CHECK(worst <= 2.0 * step);
    }
}

TEST_CASE("mask membership flips only across traced loops") {
    Gen g(31);
    for (const char* s : {"1+(x+1)*y+(x-1)*z", "(x+1)*(y+1)+z"}) {
        CAPTURE(s);
        const auto P = poly(s);
        const int R = 96;
        const auto m = deninger_region(P, R);
        const auto paths = trace_boundary(P, 0.01);
        const double h = 2.0 * M_PI / R;
        for (int n = 0; n < 40; ++n) {
            const int j = g.integer(0, R - 1);
            const bool horizontal = g.integer(0, 1) == 1;
            for (int i = 0; i < R; ++i) {
                const int i2 = (i + 1) % R;
                const bool a = horizontal ? m.at(i, j) : m.at(j, i);
                const bool b = horizontal ? m.at(i2, j) : m.at(j, i2);
                const double tm = horizontal ? m.t(i) + 0.5 * h : m.t(j);
                const double sm = horizontal ? m.s(j) : m.s(i) + 0.5 * h;
                const double d = torus_distance(paths, tm, sm);
                if (a != b) CHECK(d <= h);
                if (d > 2.0 * h) CHECK(a == b);
            }
        }
    }
}

TEST_CASE("indentation") {
    const auto P = poly("x^2+1+(x+1)^2*y+(x-1)^2*z");
    const auto paths = trace_boundary(P, 0.02);
    REQUIRE(!paths.empty());
    const auto q = indent_path(P, paths[0], 1e-2);
    CHECK(q.indented);
    CHECK(q.size() == paths[0].size());
    for (size_t k = 0; k < q.size(); ++k) {
        REQUIRE(std::abs(P.eval(q.samples[k].data())) <= 1e-9 * P.coefficient_scale());
        const double t = std::arg(paths[0].samples[k][0]);
        CHECK(std::abs(std::remainder(std::arg(q.samples[k][0]) - t / 1.01, 2.0 * M_PI)) <= 1e-9);
    }
}

TEST_CASE("CSV and SVG output") {
    const auto P = poly("1+(x+1)*y+(x-1)*z");
    const auto paths = trace_boundary(P, 0.05);
    std::ostringstream csv;
    write_paths_csv(csv, paths);
    size_t lines = 0, total = 0;
    for (char c : csv.str()) lines += c == '\n';
    for (const auto& p : paths) total += p.size();
    CHECK(lines == total + 1);
    std::ostringstream svg;
    write_region_svg(svg, deninger_region(P, 32), paths);
    CHECK(svg.str().rfind("<svg", 0) == 0);
    CHECK(svg.str().find("</svg>") != std::string::npos);
}

}
