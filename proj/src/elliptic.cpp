#include "mlab/elliptic.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

namespace mlab {

__int128 WeierstrassCurve::b2() const { return (__int128)a1 * a1 + 4 * (__int128)a2; }
__int128 WeierstrassCurve::b4() const { return 2 * (__int128)a4 + (__int128)a1 * a3; }
__int128 WeierstrassCurve::b6() const { return (__int128)a3 * a3 + 4 * (__int128)a6; }
__int128 WeierstrassCurve::b8() const {
    return (__int128)a1 * a1 * a6 + 4 * (__int128)a2 * a6 - (__int128)a1 * a3 * a4 + (__int128)a2 * a3 * a3 -
           (__int128)a4 * a4;
}
__int128 WeierstrassCurve::c4() const { return b2() * b2() - 24 * b4(); }
__int128 WeierstrassCurve::c6() const { return -b2() * b2() * b2() + 36 * b2() * b4() - 216 * b6(); }
__int128 WeierstrassCurve::discriminant() const {
    const __int128 B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
    return -B2 * B2 * B8 - 8 * B4 * B4 * B4 - 27 * B6 * B6 + 9 * B2 * B4 * B6;
}

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

void WeierstrassCurve::validate() const {
    const __int128 disc = discriminant();
    if (disc == 0) throw std::invalid_argument("curve " + label + ": singular model");
    if (conductor <= 0) throw std::invalid_argument("curve " + label + ": conductor must be positive");
    std::int64_t n = conductor;
    for (std::int64_t p = 2; p * p <= n || n > 1; ++p) {
        if (p * p > n) p = n;
        if (n % p != 0) continue;
        while (n % p == 0) n /= p;
        if (disc % p != 0)
            throw std::invalid_argument("curve " + label + ": conductor prime " + std::to_string(p) +
                                        " does not divide the discriminant");
    }
    if (root_number && *root_number != 1 && *root_number != -1)
        throw std::invalid_argument("curve " + label + ": root number must be +1 or -1");
}

namespace {

using u64 = std::uint64_t;

std::int64_t mod(__int128 a, std::int64_t p) {
    __int128 r = a % p;
    if (r < 0) r += p;
    return std::int64_t(r);
}

u64 mulmod(u64 a, u64 b, u64 p) { return (unsigned __int128)a * b % p; }

u64 powmod(u64 b, u64 e, u64 p) {
    u64 r = 1 % p;
    b %= p;
    while (e) {
        if (e & 1) r = mulmod(r, b, p);
        b = mulmod(b, b, p);
        e >>= 1;
    }
    return r;
}

u64 invmod(u64 a, u64 p) {
    std::int64_t t = 0, nt = 1, r = std::int64_t(p), nr = std::int64_t(a % p);
    while (nr) {
        const std::int64_t q = r / nr;
        std::tie(t, nt) = std::make_tuple(nt, t - q * nt);
        std::tie(r, nr) = std::make_tuple(nr, r - q * nr);
    }
    if (t < 0) t += std::int64_t(p);
    return u64(t);
}

int legendre(u64 a, u64 p) {
    a %= p;
    if (a == 0) return 0;
    return powmod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

// Tonelli-Shanks; a must be a nonzero square mod an odd prime p.
u64 sqrtmod(u64 a, u64 p) {
    if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
    u64 q = p - 1;
    int s = 0;
    while (q % 2 == 0) q /= 2, ++s;
    u64 z = 2;
    while (legendre(z, p) != -1) ++z;
    u64 m = s, c = powmod(z, q, p), t = powmod(a, q, p), r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        u64 i = 0, tt = t;
        while (tt != 1) tt = mulmod(tt, tt, p), ++i;
        u64 b = c;
        for (u64 j = 0; j + i + 1 < m; ++j) b = mulmod(b, b, p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return r;
}

// Affine arithmetic on y^2 = x^3 + A x + B over F_p, p > 3.
struct Pt {
    u64 x = 0, y = 0;
    bool inf = true;
};

struct ShortCurve {
    u64 p, A, B;

    Pt neg(const Pt& P) const { return P.inf ? P : Pt{P.x, (p - P.y) % p, false}; }

    Pt add(const Pt& P, const Pt& Q) const {
        if (P.inf) return Q;
        if (Q.inf) return P;
        u64 lam;
        if (P.x == Q.x) {
            if ((P.y + Q.y) % p == 0) return Pt{};
            lam = mulmod((3 * mulmod(P.x, P.x, p) + A) % p, invmod(2 * P.y % p, p), p);
        } else {
            lam = mulmod((Q.y + p - P.y) % p, invmod((Q.x + p - P.x) % p, p), p);
        }
        const u64 x3 = (mulmod(lam, lam, p) + 2 * p - P.x - Q.x) % p;
        const u64 y3 = (mulmod(lam, (P.x + p - x3) % p, p) + p - P.y) % p;
        return Pt{x3, y3, false};
    }

    Pt mul(Pt P, std::int64_t k) const {
        if (k < 0) {
            P = neg(P);
            k = -k;
        }
        Pt R;
        while (k) {
            if (k & 1) R = add(R, P);
            P = add(P, P);
            k >>= 1;
        }
        return R;
    }

    u64 rhs(u64 x) const { return (mulmod(mulmod(x, x, p), x, p) + mulmod(A, x, p) + B) % p; }
};

// All a in [-L, L] with a*P == Q, by baby-step giant-step.
std::set<std::int64_t> solve_multiplier(const ShortCurve& E, const Pt& P, const Pt& Q, std::int64_t L) {
    std::set<std::int64_t> out;
    const std::int64_t m = std::int64_t(std::ceil(std::sqrt(double(2 * L + 1))));
    std::unordered_multimap<u64, std::pair<std::int64_t, u64>> baby;
    baby.reserve(size_t(2 * m + 2));
    Pt jP;  // 0*P
    bool order_small = false;
    for (std::int64_t j = 1; j <= m; ++j) {
        jP = E.add(jP, P);
        if (jP.inf) {
            order_small = true;
            break;
        }
        baby.emplace(jP.x, std::make_pair(j, jP.y));
    }
    if (order_small) return out;  // caller retries with another point
    const Pt step = E.mul(P, 2 * m + 1);
    std::int64_t c = -L + m;
    Pt R = E.add(Q, E.neg(E.mul(P, c)));
    for (; c - m <= L; c += 2 * m + 1) {
        if (R.inf) {
            if (c >= -L && c <= L) out.insert(c);
        } else {
            auto range = baby.equal_range(R.x);
            for (auto it = range.first; it != range.second; ++it) {
                const auto [j, y] = it->second;
                const std::int64_t a = (y == R.y) ? c + j : c - j;
                if (a >= -L && a <= L) out.insert(a);
            }
        }
        R = E.add(R, E.neg(step));
    }
    return out;
}

std::int64_t ap_bsgs(const WeierstrassCurve& W, std::int64_t p, bool& ok) {
    ok = false;
    const u64 up = u64(p);
    ShortCurve E{up, u64(mod(-27 * W.c4(), p)), u64(mod(-54 * W.c6(), p))};
    const std::int64_t L = std::int64_t(std::floor(2.0 * std::sqrt(double(p))));
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL ^ u64(p));
    std::set<std::int64_t> cand;
    bool first = true;
    for (int attempt = 0; attempt < 40; ++attempt) {
        const u64 x = rng() % up;
        const u64 r = E.rhs(x);
        if (r == 0 || legendre(r, up) != 1) continue;
        const Pt P{x, sqrtmod(r, up), false};
        const Pt Q = E.mul(P, p + 1);
        const auto s = solve_multiplier(E, P, Q, L);
        if (s.empty()) continue;
        if (first) {
            cand = s;
            first = false;
        } else {
            std::set<std::int64_t> keep;
            for (auto a : cand)
                if (s.count(a)) keep.insert(a);
            cand.swap(keep);
        }
        if (cand.size() == 1) {
            ok = true;
            return *cand.begin();
        }
    }
    return 0;
}

bool divides_conductor(const WeierstrassCurve& E, std::int64_t p) { return E.conductor % p == 0; }

}  // namespace

std::int64_t count_points_bruteforce(const WeierstrassCurve& E, std::int64_t p, bool smooth_only) {
    const std::int64_t a1 = mod(E.a1, p), a2 = mod(E.a2, p), a3 = mod(E.a3, p), a4 = mod(E.a4, p),
                       a6 = mod(E.a6, p);
    std::int64_t count = 1;  // point at infinity, always smooth
    for (std::int64_t x = 0; x < p; ++x)
        for (std::int64_t y = 0; y < p; ++y) {
            const std::int64_t F = mod((__int128)y * y + a1 * x * y + a3 * y - x * x * x - a2 * x * x - a4 * x - a6, p);
            if (F != 0) continue;
            if (smooth_only) {
                const std::int64_t Fx = mod(a1 * y - 3 * x * x - 2 * a2 * x - a4, p);
                const std::int64_t Fy = mod(2 * y + a1 * x + a3, p);
                if (Fx == 0 && Fy == 0) continue;
            }
            ++count;
        }
    return count;
}

std::int64_t ap_by_counting(const WeierstrassCurve& E, std::int64_t p) {
    if (p <= 3) return p + 1 - count_points_bruteforce(E, p, false);
    // (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
    std::vector<signed char> chi(size_t(p), -1);
    chi[0] = 0;
    for (std::int64_t y = 1; y <= (p - 1) / 2; ++y) chi[size_t(y * y % p)] = 1;
    const std::int64_t c2 = mod(E.b2(), p), c1 = mod(2 * E.b4(), p), c0 = mod(E.b6(), p);
    std::int64_t s = 0;
    for (std::int64_t x = 0; x < p; ++x) {
        const std::int64_t f = ((((4 * x + c2) % p) * x + c1) % p * x + c0) % p;
        s += chi[size_t(f)];
    }
    return -s;
}

std::int64_t ap(const WeierstrassCurve& E, std::int64_t p) {
    if (!is_prime(p)) throw std::invalid_argument("ap: " + std::to_string(p) + " is not prime");
    if (divides_conductor(E, p)) {
        if (p <= 2000) return p - count_points_bruteforce(E, p, true);
        // The reduction has exactly one singular point.
        return ap_by_counting(E, p);
    }
    if (p <= 3) return p + 1 - count_points_bruteforce(E, p, false);
    if (p < 3000) return ap_by_counting(E, p);
    bool ok = false;
    const std::int64_t a = ap_bsgs(E, p, ok);
    return ok ? a : ap_by_counting(E, p);
}

LSeriesPrefix l_coefficients(const WeierstrassCurve& E, std::int64_t N) {
    if (N < 1) throw std::invalid_argument("l_coefficients: N must be positive");
    std::vector<std::int32_t> spf(size_t(N + 1), 0);
    for (std::int64_t i = 2; i <= N; ++i)
        if (spf[i] == 0)
            for (std::int64_t j = i; j <= N; j += i)
                if (spf[j] == 0) spf[j] = std::int32_t(i);
    LSeriesPrefix out{E.label, std::vector<std::int64_t>(size_t(N + 1), 0)};
    auto& a = out.a;
    a[1] = 1;
    for (std::int64_t n = 2; n <= N; ++n) {
        const std::int64_t p = spf[n];
        std::int64_t m = n, pk = 1;
        while (m % p == 0) m /= p, pk *= p;
        if (m > 1) {
            a[n] = a[pk] * a[m];
        } else if (pk == p) {
            a[n] = ap(E, p);
        } else if (divides_conductor(E, p)) {
            a[n] = a[p] * a[pk / p];
        } else {
            a[n] = a[p] * a[pk / p] - p * a[pk / p / p];
        }
    }
    return out;
}

double l3_tail_bound(std::int64_t N) {
    // |a_n| <= d(n) sqrt(n) and sum_{n<=x} d(n) <= x(1 + log x); partial
    // summation gives sum_{n>N} d(n) n^{-5/2} <= (5/2) int_N^inf (1 + log x) x^{-5/2} dx.
    const double n = double(N);
    return std::pow(n, -1.5) * (5.0 / 3.0 * std::log(n) + 25.0 / 9.0);
}

std::int64_t terms_for_tail(double tol) {
    std::int64_t N = 1024;
    while (l3_tail_bound(N) > tol) N *= 2;
    return N;
}

LValue l_value_3(const LSeriesPrefix& c) {
    const std::int64_t N = c.length();
    double s = 0.0;
    for (std::int64_t n = N; n >= 1; --n) {
        const double dn = double(n);
        s += double(c.a[n]) / (dn * dn * dn);
    }
    return {s, l3_tail_bound(N), N};
}

LValue l_value_3(const WeierstrassCurve& E, std::int64_t N) {
    if (N < 1000) throw std::invalid_argument("l_value_3: N must be at least 1000");
    return l_value_3(l_coefficients(E, N));
}

double lprime_minus1(const WeierstrassCurve& E) {
    if (!E.root_number) throw std::invalid_argument("lprime_minus1: curve " + E.label + " has no root number");
    using Key = std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t, std::int64_t, std::int64_t>;
    static std::mutex mu;
    static std::map<Key, double> memo;  // L(E,3)
    const Key key{E.a1, E.a2, E.a3, E.a4, E.a6, E.conductor};
    double L3;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = memo.find(key);
        if (it != memo.end()) {
            L3 = it->second;
        } else {
            L3 = l_value_3(E, terms_for_tail(1e-8)).value;
            memo.emplace(key, L3);
        }
    }
    const double pi = std::numbers::pi;
    const double N = double(E.conductor);
    return -double(*E.root_number) * N * N * L3 / (8.0 * std::pow(pi, 4));
}

double functional_equation_defect(const WeierstrassCurve& E, double c) {
    if (!E.root_number) throw std::invalid_argument("functional_equation_defect: no root number");
    const double N = double(E.conductor);
    const double y1 = c / std::sqrt(N), y2 = 1.0 / (N * y1);
    const double ymin = std::min(y1, y2);
    const std::int64_t terms = std::int64_t(40.0 / (2.0 * std::numbers::pi * ymin)) + 10;
    const auto coeffs = l_coefficients(E, terms);
    auto F = [&](double y) {
        double s = 0.0;
        for (std::int64_t n = terms; n >= 1; --n) s += double(coeffs.a[n]) * std::exp(-2.0 * std::numbers::pi * n * y);
        return s;
    };
    const double f1 = F(y1), f2 = F(y2);
    return std::abs(f2 - double(*E.root_number) * N * y1 * y1 * f1) / std::max(std::abs(f2), 1e-300);
}

}  // namespace mlab
