#include <cmath>

#include "doctest.h"
#include "mlab/registry.hpp"
#include "support.hpp"

using namespace mlab;
using testsupport::Gen;

namespace {

const Registry& registry() {
    static const Registry reg = load_registry(testsupport::data_dir());
    return reg;
}

VerifyOptions quick(double tol) {
    VerifyOptions o;
    o.tol = tol;
    o.mahler_tol = 1e-8;
    o.boundary = false;
    return o;
}

}  // namespace

TEST_SUITE("registry") {

TEST_CASE("rational recovery") {
    CHECK(recover_rational(-1.2500004, 100) == Rational(-5, 4));
    CHECK(recover_rational(0.3333333, 100) == Rational(1, 3));
    CHECK(recover_rational(-1.0 / 48.0 + 1e-9, 100) == Rational(-1, 48));
    CHECK(recover_rational(7.0, 1) == Rational(7));
    // pi: no p/q with q <= 10 comes within 1e-4 pi
    bool any = false;
    for (long long q = 1; q <= 10; ++q) {
        const long long p = std::llround(M_PI * q);
        any = any || std::abs(M_PI - double(p) / double(q)) <= 1e-4 * M_PI;
    }
    CHECK_FALSE(any);
    CHECK_FALSE(recover_rational(M_PI, 10).has_value());
    // the first convergent inside the gate wins
    CHECK(recover_rational(M_PI, 200) == Rational(333, 106));
    CHECK(recover_rational(M_PI, 200, 1e-6) == Rational(355, 113));
    // round trip: within 1/(2 q^2) of p/q only p/q itself is a convergent
    Gen g(91);
    for (int i = 0; i < 500; ++i) {
        const Rational q(g.integer(-400, 400), g.integer(1, 60));
        const double v = to_double(q) + g.uniform(-1e-8, 1e-8);
        CHECK(recover_rational(v, 60, 1e-7) == q);
    }
}

TEST_CASE("registry contents") {
    const auto& reg = registry();
    CHECK(reg.identities.size() == 25);
    CHECK(reg.curves.size() >= 13);
    for (const auto& s : reg.identities) {
        CAPTURE(s.id);
        CHECK(s.has_rhs());
        if (!s.curve.empty()) CHECK_NOTHROW(reg.curve(s.curve));
        if (s.table == "3") CHECK(s.status == IdentityStatus::Proven);
        if (s.table == "2" || s.table == "4") CHECK(s.status == IdentityStatus::TheoremInapplicable);
    }
    CHECK(reg.identity("t1-row12").long_running);
    CHECK(reg.identity("t1-row12").a == Rational(-1, 48));
    CHECK(reg.identity("t1-row5").a == Rational(-5, 4));
    CHECK_THROWS(reg.identity("nope"));
    CHECK_THROWS(reg.curve("11a1-unknown"));
    CHECK(parse_status(status_name(IdentityStatus::TheoremInapplicable)) == IdentityStatus::TheoremInapplicable);
    CHECK_THROWS(load_registry("/nonexistent"));
}

TEST_CASE("character identity x^2+1+(x+1)^2 y+(x-1)^2 z") {
    const auto r = verify_identity(registry(), registry().identity("t3-row6"), quick(1e-4));
    CHECK(r.verdict == CheckVerdict::Pass);
    CHECK(std::abs(r.residual) <= 1e-4 * std::abs(r.m));
    REQUIRE(!r.lprime_chi.empty());
}

TEST_CASE("elliptic identities at 1e-3") {
    for (const char* id : {"t1-row3", "t1-row5"}) {
        const std::string name = id;
        CAPTURE(name);
        VerifyOptions o = quick(1e-3);
        o.boundary = true;
        const auto r = verify_identity(registry(), registry().identity(id), o);
        CHECK(r.verdict == CheckVerdict::Pass);
        REQUIRE(r.lprime_curve.has_value());
        CHECK(r.a_fitted == registry().identity(id).a);
        CHECK(r.loops >= 1);
    }
}

TEST_CASE("a wrong coefficient fails") {
    IdentitySpec s = registry().identity("t1-row5");
    s.a = Rational(-1);
    CHECK(verify_identity(registry(), s, quick(1e-3)).verdict == CheckVerdict::Fail);
}

TEST_CASE("a missing coefficient is fitted, not passed") {
    IdentitySpec s = registry().identity("t1-row5");
    s.a.reset();
    const auto r = verify_identity(registry(), s, quick(1e-3));
    CHECK(r.verdict == CheckVerdict::Inconclusive);
    CHECK(r.a_fitted == Rational(-5, 4));
}

TEST_CASE("every proven identity verifies at its declared tolerance") {
    for (const auto& s : registry().identities) {
        if (s.status != IdentityStatus::Proven) continue;
        CAPTURE(s.id);
        VerifyOptions o;
        o.boundary = false;
        CHECK(verify_identity(registry(), s, o).verdict == CheckVerdict::Pass);
    }
}

TEST_CASE("reports are deterministic") {
    const auto& s = registry().identity("t3-row1");
    const auto a = verify_identity(registry(), s, quick(1e-4)), b = verify_identity(registry(), s, quick(1e-4));
    CHECK(a.json() == b.json());
    CHECK(a.str() == b.str());
    CHECK(a.json().find("\"verdict\"") != std::string::npos);
}

}
