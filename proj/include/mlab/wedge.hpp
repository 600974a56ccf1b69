#pragma once
// Wedge decompositions x ^ y ^ z = sum_j c_j f_j ^ (1 - f_j) ^ g_j on V_P:
// the cyclotomic construction for P = A(x) + B(x) y + C(x) z, the
// tau-pullback, numeric certification through eta, and a JSON file format.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mlab/decomposition.hpp"
#include "mlab/poly.hpp"

namespace mlab {

/// unit * x^x_power * prod Phi_n^e.
struct CyclotomicFactorization {
    Rational unit{1};
    int x_power = 0;
    std::map<int, int> phi;  // n -> exponent

    /// Factor a Laurent polynomial in x alone; throws std::invalid_argument
    /// when a non-cyclotomic factor remains.
    static CyclotomicFactorization factor(const LaurentPoly& A);
    RationalExpr expr() const;
    LaurentPoly poly(const std::vector<std::string>& variables = {"x"}) const;
    std::string str() const;
};

/// Integer coefficients of Phi_n, ascending.
std::vector<long long> cyclotomic_polynomial(int n);
int moebius(int n);

/// x ^ Phi_n(x) ^ g as a sum of {+-x^k}_2 (x) g terms.
Decomposition cyclotomic_reduction(int n, const RationalExpr& g);

/// Decomposition for P = A + B y + C z with A, B, C cyclotomic up to powers
/// of x. Canonical order: the x ^ y ^ (A/C) block (factors of A, then of
/// C, each by increasing n), the single {-B y / A}_2 (x) x term, then the
/// -x ^ (B/A) ^ (1 + B y / A) block (factors of B/A after cancelling those
/// shared with A: numerator, then denominator).
Decomposition cyclotomic_decompose(const CyclotomicFactorization& A, const CyclotomicFactorization& B,
                                   const CyclotomicFactorization& C);

struct LinearShape {
    LaurentPoly A, B, C;  // polynomials in x
};
/// Splits P(x, y, z) = A(x) + B(x) y + C(x) z; throws if P has another shape.
LinearShape split_linear(const LaurentPoly& P);
/// split_linear followed by factorization and cyclotomic_decompose.
Decomposition cyclotomic_decompose(const LaurentPoly& P);

/// Substitutes (1/x, 1/y, 1/z) in every f and g.
Decomposition tau_pull(const Decomposition& d);
/// d together with its tau-pullback.
Decomposition lambda_of(const Decomposition& d);

/// max over random samples of V_P of |eta(targets) - sum c_j eta(f_j, 1 - f_j, g_j)|
/// on random tangent bivectors. Samples draw (x, y) = (r e^{it}, r' e^{is})
/// with r, r' in [0.9, 1.1] and a random fiber root z. targets default to (x, y, z).
double decomposition_defect(const LaurentPoly& P, const Decomposition& d, int samples = 100,
                            std::uint64_t seed = 1, const std::vector<RationalExpr>& targets = {});

struct DecompositionFile {
    std::string id;
    std::string polynomial;
    std::string note;
    Decomposition xi;
};

DecompositionFile load_decomposition(const std::string& path);
DecompositionFile parse_decomposition_json(const std::string& text);
std::string decomposition_json(const DecompositionFile& f);

}  // namespace mlab
