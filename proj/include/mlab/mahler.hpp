#pragma once
// Logarithmic Mahler measures via Jensen's formula in the last variable.

#include <stdexcept>
#include <vector>

#include "mlab/poly.hpp"

namespace mlab {

/// Leading coefficient of the fiber polynomial vanishes at the requested base point.
struct FiberDegenerate : std::domain_error {
    using std::domain_error::domain_error;
};

/// Adaptive quadrature hit its panel cap; carries the best estimate so far.
struct BudgetExceeded : std::runtime_error {
    BudgetExceeded(double best, double err);
    double best_estimate;
    double error_estimate;
};

struct MahlerResult {
    double value = 0.0;
    double error = 0.0;
    long evaluations = 0;
};

/// Roots of c[0] + c[1] z + ... + c[d] z^d (c[d] != 0). Companion-matrix
/// eigenvalues for d <= 4, Aberth iteration beyond.
std::vector<cplx> polynomial_roots(const std::vector<cplx>& c);

/// P viewed as a polynomial in its last variable, with the other variables
/// evaluated numerically. Coefficient polynomials are flattened to doubles.
class FiberEvaluator {
public:
    explicit FiberEvaluator(const LaurentPoly& P);

    int base_dims() const { return base_dims_; }
    int degree() const { return int(coeffs_.size()) - 1; }

    /// Ascending coefficients in the last variable (lowest power shifted to 0).
    void coefficients(const cplx* base, std::vector<cplx>& out) const;
    /// Derivatives of the coefficients with respect to base variable k.
    void coefficient_derivatives(const cplx* base, int k, std::vector<cplx>& out) const;
    /// log|lead| + sum log+|root|, after trimming numerically zero leading
    /// coefficients. Returns -inf when the whole fiber vanishes.
    double jensen(const cplx* base) const;
    /// Roots of the trimmed fiber polynomial; empty when it is constant.
    std::vector<cplx> roots(const cplx* base) const;

private:
    struct Term {
        std::vector<int> e;
        double c;
    };
    int base_dims_ = 0;
    std::vector<std::vector<Term>> coeffs_;
    std::vector<int> min_e_, max_e_;
};

/// All roots of P(x0, y0, z) in z, P in variables (x, y, z).
std::vector<cplx> fiber_roots(const LaurentPoly& P, cplx x0, cplx y0);
std::vector<cplx> fiber_roots(const LaurentPoly& P, const std::vector<cplx>& base);

/// m(P) for P in at most three variables; |value - m(P)| <= error <= tol is the
/// a-posteriori estimate of the nested adaptive quadrature.
MahlerResult mahler_measure(const LaurentPoly& P, double tol = 1e-8);

/// The coefficient of the top power of the last variable of P, as a
/// polynomial in the remaining variables.
LaurentPoly leading_coefficient(const LaurentPoly& P);
MahlerResult leading_coeff_measure(const LaurentPoly& P, double tol = 1e-8);

}  // namespace mlab
