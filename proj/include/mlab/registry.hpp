#pragma once
// Identity database for the Mahler measure tables, the end-to-end
// verification pipeline, and rational reconstruction of coefficients.

#include <optional>
#include <string>
#include <vector>

#include "mlab/elliptic.hpp"
#include "mlab/expr.hpp"

namespace mlab {

/// Continued-fraction convergent p/q of v with q <= max_den and
/// |v - p/q| <= tol, where tol defaults to 1e-4 max(1, |v|).
std::optional<Rational> recover_rational(double v, long long max_den, double tol = 0.0);

enum class IdentityStatus { Proven, Conjectural, TheoremInapplicable };
const char* status_name(IdentityStatus s);
IdentityStatus parse_status(const std::string& s);

/// b * L'(chi_{-f}, -1) with f = 3 or 4.
struct CharacterTerm {
    int modulus = 3;
    Rational b{0};
};

struct IdentitySpec {
    std::string id;
    std::string table;          // "1".."4" or "mix"
    int row = 0;
    std::string polynomial;     // the polynomial measured
    std::string printed;        // as printed when a rewrite is measured instead
    std::string curve;          // empty when no elliptic term
    std::optional<Rational> a;  // conjectured coefficient of L'(E,-1)
    std::vector<CharacterTerm> characters;
    IdentityStatus status = IdentityStatus::Conjectural;
    double tol = 1e-4;          // declared relative tolerance
    bool long_running = false;
    std::string decomposition;  // file under decompositions/, if any
    std::string note;

    bool has_rhs() const { return !curve.empty() || !characters.empty(); }
};

struct Registry {
    std::string dir;
    std::vector<WeierstrassCurve> curves;
    std::vector<IdentitySpec> identities;

    const WeierstrassCurve& curve(const std::string& label) const;
    const IdentitySpec& identity(const std::string& id) const;
};

/// Reads curves.json and identities.json from dir; validates every model.
Registry load_registry(const std::string& dir);

enum class CheckVerdict { Pass, Fail, Inconclusive };
const char* check_name(CheckVerdict v);

struct VerificationReport {
    std::string id;
    double m = 0.0, m_error = 0.0;              // m(P)
    double m_tilde = 0.0, m_tilde_error = 0.0;  // m(P~)
    std::optional<double> lprime_curve;         // L'(E,-1)
    std::vector<std::pair<int, double>> lprime_chi;
    double residual = 0.0;  // m - m~ - a L' - sum b L'(chi)
    double scale = 1.0;
    double tol = 0.0;
    std::optional<Rational> a_fitted;  // recovered from the residual without the a L' term
    double a_ratio = 0.0;              // the unrounded ratio behind a_fitted
    CheckVerdict verdict = CheckVerdict::Inconclusive;
    int loops = -1;  // boundary components (P linear in z only)
    std::vector<std::pair<cplx, cplx>> singular;
    std::vector<std::string> warnings;

    std::string str() const;
    std::string json() const;
};

struct VerifyOptions {
    double tol = -1.0;         // relative tolerance; negative means the declared one
    double mahler_tol = 1e-9;  // absolute quadrature target
    bool boundary = true;      // trace the boundary for diagnostics
    double step = 0.01;
};

/// Measures both sides. With every coefficient conjectured the verdict is
/// PASS when |residual| <= tol * max(|m|, 1e-12); a missing a is fitted by
/// recover_rational and reported as inconclusive evidence.
VerificationReport verify_identity(const Registry& reg, const IdentitySpec& spec, const VerifyOptions& opt = {});

}  // namespace mlab
