#pragma once
// Dilogarithm family: Li2, the Bloch-Wigner function D, the five-term
// relation, and L'(chi,-1) for odd quadratic characters.

#include <complex>
#include <stdexcept>
#include <vector>

namespace mlab {

using cplx = std::complex<double>;

/// A point of the projective line: a finite complex number or infinity.
class ComplexOrInfinity {
public:
    ComplexOrInfinity(cplx v);  // NOLINT(google-explicit-constructor)
    ComplexOrInfinity(double v) : ComplexOrInfinity(cplx(v, 0.0)) {}  // NOLINT
    static ComplexOrInfinity infinity();

    bool is_infinite() const { return inf_; }
    cplx value() const;

private:
    ComplexOrInfinity() = default;
    cplx v_{};
    bool inf_ = false;
};

/// Principal dilogarithm, analytic off [1, inf).
cplx li2(cplx z);

/// Bloch-Wigner dilogarithm D(z) = Im Li2(z) + arg(1-z) log|z|.
double bloch_wigner(const ComplexOrInfinity& z);
double bloch_wigner(cplx z);

/// Sum of the five D-values whose vanishing is the five-term relation.
/// Throws std::domain_error when x or y lies in {0,1} or xy = 1.
double five_term_defect(cplx x, cplx y);

/// Odd quadratic Dirichlet character given by its value table on 0..f-1.
class QuadraticCharacter {
public:
    QuadraticCharacter(int modulus, std::vector<int> values);

    static QuadraticCharacter chi_minus3();
    static QuadraticCharacter chi_minus4();
    /// Kronecker symbol (d/.) for a negative fundamental discriminant d.
    static QuadraticCharacter from_discriminant(int d);

    int modulus() const { return f_; }
    int operator()(long long k) const;

private:
    int f_;
    std::vector<int> values_;
};

/// L'(chi,-1) = f/(4 pi) sum_k chi(k) D(exp(2 pi i k/f)).
double dirichlet_lprime_minus1(const QuadraticCharacter& chi);

namespace detail {
/// Taylor series sum z^k/k^2; only meant for |z| <= 1/2.
cplx li2_series(cplx z);
/// Bernoulli-number series in u = -log(1-z); meant for |z| <= 1, Re z <= 1/2.
cplx li2_bernoulli(cplx z);
}  // namespace detail

}  // namespace mlab
