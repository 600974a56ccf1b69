#include <cmath>

#include "doctest.h"
#include "mlab/mahler.hpp"
#include "mlab/quadrature.hpp"
#include "mlab/registry.hpp"
#include "mlab/specialfn.hpp"
#include "support.hpp"

using namespace mlab;
using testsupport::Gen;

namespace {

const std::vector<std::string> XYZ = {"x", "y", "z"};

LaurentPoly poly(const std::string& s) { return LaurentPoly::parse(s, XYZ); }

}  // namespace

TEST_SUITE("mahler") {

TEST_CASE("adaptive Gauss-Kronrod") {
    const auto r = integrate_adaptive([](double t) { return std::cos(t); }, 0.0, M_PI / 2, 1e-13);
    CHECK(r.converged);
    CHECK(std::abs(r.value - 1.0) <= 1e-13);
    // log singularity: int_0^1 log t dt = -1
    const auto s = integrate_adaptive([](double t) { return std::log(t); }, 0.0, 1.0, 1e-10);
    CHECK(std::abs(s.value + 1.0) <= 1e-9);
    CHECK(s.error <= 1e-10);
    const auto capped = integrate_adaptive([](double t) { return std::log(std::abs(t - 0.3)); }, 0.0, 1.0, 1e-15, 0.0, 3);
    CHECK_FALSE(capped.converged);
    CHECK(capped.panels <= 3);
}

TEST_CASE("fiber roots") {
    const auto r = fiber_roots(poly("(x+1)*(y+1)+z"), 1.0, 1.0);
    REQUIRE(r.size() == 1);
    CHECK(std::abs(r[0] + 4.0) <= 1e-14);
    auto q = fiber_roots(LaurentPoly::parse("z^2 - x", XYZ), 1.0, 0.5);
    REQUIRE(q.size() == 2);
    std::sort(q.begin(), q.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
    CHECK(std::abs(q[0] + 1.0) <= 1e-14);
    CHECK(std::abs(q[1] - 1.0) <= 1e-14);
    CHECK_THROWS_AS(fiber_roots(poly("1+x*z"), 0.0, 1.0), FiberDegenerate);
    CHECK_THROWS_AS(fiber_roots(poly("1+x*y"), 2.0, 1.0), FiberDegenerate);
}

TEST_CASE("fiber roots re-expand to the fiber polynomial") {
    Gen g(13);
    for (int i = 0; i < 200; ++i) {
        // random cubic in z with coefficients polynomial in x, y
        LaurentPoly P(XYZ);
        for (int k = 0; k <= 3; ++k)
            for (int t = 0; t < 3; ++t)
                P.add_term({g.integer(0, 2), g.integer(0, 2), k}, Rational(g.integer(-4, 4)));
        P.add_term({0, 0, 3}, Rational(1));
        if (P.max_degree(2) != 3) continue;
        const cplx x = g.unit(), y = g.unit();
        std::vector<cplx> roots;
        try {
            roots = fiber_roots(P, x, y);
        } catch (const FiberDegenerate&) {
            continue;
        }
        const auto coeffs = P.coefficients_in(2);
        std::vector<cplx> c;
        const cplx base[3] = {x, y, 0.0};
        for (const auto& q : coeffs) c.push_back(q.eval(base));
        // prod (z - r_i) times the leading coefficient
        std::vector<cplx> e = {c.back()};
        for (const cplx r : roots) {
            std::vector<cplx> n(e.size() + 1, 0.0);
            for (size_t k = 0; k < e.size(); ++k) {
                n[k + 1] += e[k];
                n[k] -= r * e[k];
            }
            e = n;
        }
        REQUIRE(e.size() == c.size());
        double scale = 0.0;
        for (const cplx v : c) scale = std::max(scale, std::abs(v));
        for (size_t k = 0; k < c.size(); ++k) CHECK(std::abs(e[k] - c[k]) <= 1e-9 * scale);
    }
}

TEST_CASE("polynomial roots, companion and high degree") {
    // roots of unity of order 7
    std::vector<cplx> c(8, 0.0);
    c[0] = -1.0;
    c[7] = 1.0;
    const auto r = polynomial_roots(c);
    REQUIRE(r.size() == 7);
    for (const cplx z : r) CHECK(std::abs(std::pow(z, 7) - 1.0) <= 1e-12);
}

TEST_CASE("trivial measures") {
    CHECK(mahler_measure(LaurentPoly::parse("5", {"x"})).value == doctest::Approx(std::log(5.0)).epsilon(1e-15));
    CHECK(std::abs(mahler_measure(LaurentPoly::parse("x+1", {"x"})).value) <= 1e-10);
    CHECK(std::abs(mahler_measure(LaurentPoly::parse("x+1", XYZ)).value) <= 1e-10);
    CHECK(mahler_measure(LaurentPoly::parse("2*x^3 - 6", {"x"})).value == doctest::Approx(std::log(6.0)).epsilon(1e-12));
    CHECK_THROWS(mahler_measure(LaurentPoly::parse("x+y+z+w")));
}

TEST_CASE("repeated roots in one variable") {
    // a k-fold root scatters by eps^(1/k) under a plain eigenvalue solve
    CHECK(std::abs(mahler_measure(LaurentPoly::parse("(x+1)^3", {"x"})).value) <= 1e-14);
    CHECK(std::abs(mahler_measure(LaurentPoly::parse("(x-1)^6*(x^2+x+1)^3", {"x"})).value) <= 1e-14);
    const double v = mahler_measure(LaurentPoly::parse("3*(x+1)^3*(x-2)^4*(2*x-1)^2", {"x"})).value;
    CHECK(std::abs(v - (std::log(3.0) + 4.0 * std::log(2.0) + 2.0 * std::log(2.0))) <= 1e-13);
    CHECK(std::abs(leading_coeff_measure(poly("1+(x+1)*(x^2+x+1)*y+(x+1)^3*z")).value) <= 1e-14);
}

TEST_CASE("1+x+y equals L'(chi_-3,-1)") {
    const auto m = mahler_measure(LaurentPoly::parse("1+x+y"), 1e-9);
    CHECK(std::abs(m.value - dirichlet_lprime_minus1(QuadraticCharacter::chi_minus3())) <= 1e-6);
    CHECK(m.error <= 1e-9);
}

TEST_CASE("(x+1)(y+1)+z against -2 L'(E_15,-1)") {
    const auto reg = load_registry(testsupport::data_dir());
    const double L = lprime_minus1(reg.curve("15a8"));
    const auto m = mahler_measure(poly("(x+1)*(y+1)+z"), 1e-8);
    CHECK(std::abs(m.value - (-2.0) * L) <= 1e-3 * std::abs(m.value));
}

TEST_CASE("leading coefficient measure") {
    CHECK(std::abs(leading_coeff_measure(poly("1+x+y+z*(1+x+y+x*y)"), 1e-11).value) <= 1e-10);
    CHECK(std::abs(leading_coeff_measure(poly("x^2+1+(x+1)^2*y+(x-1)^2*z"), 1e-11).value) <= 1e-10);
    CHECK(leading_coeff_measure(poly("5*z + x")).value == doctest::Approx(std::log(5.0)).epsilon(1e-14));
    CHECK(leading_coefficient(poly("1+y*z+x*z")) == LaurentPoly::parse("x+y", {"x", "y"}));
}

TEST_CASE("multiplicativity") {
    const char* ps[] = {"1+x+y", "x-2*y+3", "x*y+y+2", "1+x^2+y"};
    for (int i = 0; i + 1 < 4; ++i) {
        const auto P = LaurentPoly::parse(ps[i], {"x", "y"}), Q = LaurentPoly::parse(ps[i + 1], {"x", "y"});
        const auto a = mahler_measure(P, 1e-8), b = mahler_measure(Q, 1e-8), ab = mahler_measure(P * Q, 1e-8);
        CHECK(std::abs(ab.value - a.value - b.value) <= 10.0 * (a.error + b.error + ab.error) + 1e-12);
    }
}

TEST_CASE("inversion invariance") {
    for (const char* s : {"1+(x+1)*y+(x-1)*z", "(x+1)*(y+1)+z", "2+x+y*z"}) {
        const auto P = poly(s);
        const auto a = mahler_measure(P, 1e-8), b = mahler_measure(P.inverted(), 1e-8);
        CHECK(std::abs(a.value - b.value) <= 10.0 * (a.error + b.error) + 1e-12);
    }
}

TEST_CASE("Jensen consistency: z-free polynomials") {
    const auto three = mahler_measure(poly("1+x+y"), 1e-10);
    const auto two = mahler_measure(LaurentPoly::parse("1+x+y", {"x", "y"}), 1e-10);
    CHECK(std::abs(three.value - two.value) <= 1e-8);
}

}
