#pragma once
// Goncharov's forms theta, rho and eta evaluated on tangent vectors, path
// integrals of rho, the residue formula and the boundary formula for m(P).

#include <array>
#include <stdexcept>
#include <vector>

#include "mlab/chains.hpp"
#include "mlab/decomposition.hpp"
#include "mlab/poly.hpp"

namespace mlab {

/// A point of V_P with one or two tangent vectors (complex (dx, dy, dz)).
struct TangentSample {
    std::array<cplx, 3> point;
    std::vector<std::array<cplx, 3>> tangents;
};

/// A function of a form vanishes or has a pole at the evaluation point.
struct ExcludedPoint : std::domain_error {
    using std::domain_error::domain_error;
};

/// theta(f, g) = log|f| dlog|g| - log|g| dlog|f| on at.tangents[which].
double eval_theta(const RationalExpr& f, const RationalExpr& g, const TangentSample& at, int which = 0);
/// rho(f, g) = -D(f) darg g + 1/3 log|g| theta(1 - f, f).
double eval_rho(const RationalExpr& f, const RationalExpr& g, const TangentSample& at, int which = 0);
/// eta(f, g, h) on the bivector (tangents[0], tangents[1]).
double eval_eta(const RationalExpr& f, const RationalExpr& g, const RationalExpr& h, const TangentSample& at);

/// sum_j c_j rho(f_j, g_j) on one tangent.
double eval_rho_sum(const Decomposition& d, const TangentSample& at, int which = 0);
/// sum_j c_j eta(f_j, 1 - f_j, g_j) on the bivector.
double eval_eta_sum(const Decomposition& d, const TangentSample& at);

struct PathIntegral {
    double value = 0.0;
    double error = 0.0;
    size_t samples = 0;
};

/// Trapezoid rule in arclength on the path samples, extrapolated against the
/// every-other-sample rule. Throws ExcludedPoint when some f_j, 1 - f_j or
/// g_j comes within 1e-7 of 0 or infinity at a sample.
PathIntegral integrate_rho(const BoundaryPath& path, const Decomposition& d);

/// -2 pi sum_j c_j v_j D(f_j(p)); values of f_j in {0, 1, inf} contribute 0.
double residue_formula(const Decomposition& d, const std::array<cplx, 3>& p, const std::vector<int>& valuations);

/// rho-integral over an indented path, extrapolated to eps -> 0 from
/// eps, eps/2, eps/4 (quadratic Richardson).
PathIntegral indented_integral(const LaurentPoly& P, const BoundaryPath& path, const Decomposition& d,
                               double eps = 1e-2);

struct BoundaryMeasure {
    double value = 0.0;
    double error = 0.0;
    double leading = 0.0;   // m(P~)
    double integral = 0.0;  // sum over paths of the rho(lambda) integral
};

/// m(P~) - 1/(8 pi^2) sum_paths integral rho(lambda), where lambda is the
/// decomposition together with its tau-pullback.
BoundaryMeasure mahler_via_boundary(const LaurentPoly& P, const Decomposition& lambda,
                                    const std::vector<BoundaryPath>& paths);

}  // namespace mlab
