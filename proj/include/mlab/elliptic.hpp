#pragma once
// L-functions of elliptic curves over Q: Frobenius traces by point counting,
// Dirichlet coefficients, L(E,3) with a rigorous tail bound, and L'(E,-1).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mlab {

struct WeierstrassCurve {
    std::string label;
    std::int64_t a1 = 0, a2 = 0, a3 = 0, a4 = 0, a6 = 0;
    std::int64_t conductor = 0;
    std::optional<int> root_number;  // +1 or -1
    std::string note;                // provenance of the model

    /// b2, b4, b6, b8, c4, c6 and the discriminant, as 128-bit integers.
    __int128 b2() const;
    __int128 b4() const;
    __int128 b6() const;
    __int128 b8() const;
    __int128 c4() const;
    __int128 c6() const;
    __int128 discriminant() const;

    /// Throws std::invalid_argument on a singular model or a conductor prime
    /// that does not divide the discriminant.
    void validate() const;
};

bool is_prime(std::int64_t n);

/// a_p. Good primes: p + 1 - #E(F_p); bad primes: p - #E_ns(F_p).
std::int64_t ap(const WeierstrassCurve& E, std::int64_t p);

/// a_p at a good prime by the O(p) quadratic-character sum; kept as an oracle.
std::int64_t ap_by_counting(const WeierstrassCurve& E, std::int64_t p);

/// #E(F_p) including the point at infinity, by enumerating all affine pairs.
std::int64_t count_points_bruteforce(const WeierstrassCurve& E, std::int64_t p, bool smooth_only);

struct LSeriesPrefix {
    std::string label;
    std::vector<std::int64_t> a;  // a[0] unused, a[1] = 1
    std::int64_t length() const { return std::int64_t(a.size()) - 1; }
};

LSeriesPrefix l_coefficients(const WeierstrassCurve& E, std::int64_t N);

struct LValue {
    double value;
    double tail_bound;
    std::int64_t terms;
};

/// Rigorous bound for sum_{n>N} d(n) sqrt(n) n^{-3}.
double l3_tail_bound(std::int64_t N);

LValue l_value_3(const WeierstrassCurve& E, std::int64_t N);
LValue l_value_3(const LSeriesPrefix& coeffs);

/// Smallest power-of-two term count whose tail bound is at most tol.
std::int64_t terms_for_tail(double tol);

/// L'(E,-1) = -eps N^2 L(E,3) / (8 pi^4), with L(E,3) tail below 1e-8.
/// Results are memoized per model.
double lprime_minus1(const WeierstrassCurve& E);

/// Functional-equation residual of the theta series
/// F(y) = sum a_n exp(-2 pi n y): |F(1/(N y)) - eps N y^2 F(y)| at y = c/sqrt(N),
/// relative to |F(y)|. Small only when conductor and root number are right.
double functional_equation_defect(const WeierstrassCurve& E, double c = 1.1);

}  // namespace mlab
