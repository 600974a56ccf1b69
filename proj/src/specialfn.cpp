#include "mlab/specialfn.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

namespace mlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kZeta2 = kPi * kPi / 6.0;

// c[k] = B_{2k} / (2k+1)!, built from B_{2k} = (-1)^{k+1} 2 (2k)! zeta(2k) / (2 pi)^{2k}
// so that no cancellation-prone Bernoulli recurrence is needed.
const std::array<double, 24>& bernoulli_coeffs() {
    static const std::array<double, 24> c = [] {
        std::array<double, 24> out{};
        for (int k = 1; k < 24; ++k) {
            double zeta = 0.0;
            if (k == 1) zeta = kPi * kPi / 6.0;
            else if (k == 2) zeta = std::pow(kPi, 4) / 90.0;
            else if (k == 3) zeta = std::pow(kPi, 6) / 945.0;
            else if (k == 4) zeta = std::pow(kPi, 8) / 9450.0;
            else
                for (int n = 60; n >= 1; --n) zeta += std::pow(double(n), -2.0 * k);
            double sign = (k % 2 == 1) ? 1.0 : -1.0;
            out[k] = sign * 2.0 * zeta / (std::pow(2.0 * kPi, 2.0 * k) * (2.0 * k + 1.0));
        }
        return out;
    }();
    return c;
}

}  // namespace

ComplexOrInfinity::ComplexOrInfinity(cplx v) : v_(v) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw std::domain_error("ComplexOrInfinity: non-finite value; use infinity()");
}

ComplexOrInfinity ComplexOrInfinity::infinity() {
    ComplexOrInfinity p;
    p.inf_ = true;
    return p;
}

cplx ComplexOrInfinity::value() const {
    if (inf_) throw std::domain_error("ComplexOrInfinity: value() of infinity");
    return v_;
}

namespace detail {

cplx li2_series(cplx z) {
    cplx sum = 0.0, zk = z;
    for (int k = 1; k < 400; ++k) {
        cplx term = zk / double(k) / double(k);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        zk *= z;
    }
    return sum;
}

cplx li2_bernoulli(cplx z) {
    const cplx u = -std::log(1.0 - z);
    const cplx u2 = u * u;
    const auto& c = bernoulli_coeffs();
    // Horner in u^2 over the even Bernoulli terms.
    cplx acc = 0.0;
    for (int k = 23; k >= 1; --k) acc = acc * u2 + c[k];
    return u - 0.25 * u2 + acc * u2 * u;
}

}  // namespace detail

cplx li2(cplx z) {
    if (z == cplx(0.0)) return 0.0;
    if (z == cplx(1.0)) return kZeta2;
    const double r = std::abs(z);
    if (r > 1.0) {
        const cplx l = std::log(-z);
        return -li2(1.0 / z) - kZeta2 - 0.5 * l * l;
    }
    if (r <= 0.5) return detail::li2_series(z);
    if (z.real() > 0.5) {
        const cplx w = 1.0 - z;
        return kZeta2 - std::log(z) * std::log(w) - detail::li2_bernoulli(w);
    }
    return detail::li2_bernoulli(z);
}

double bloch_wigner(cplx z) {
    if (z == cplx(0.0) || z == cplx(1.0)) return 0.0;
    if (z.imag() == 0.0) return 0.0;
    if (std::abs(z) > 1.0) return -bloch_wigner(1.0 / z);
    const double im = li2(z).imag();
    const cplx w = 1.0 - z;
    if (std::abs(w) < 1e-300) return im;
    return im + std::arg(w) * std::log(std::abs(z));
}

double bloch_wigner(const ComplexOrInfinity& z) {
    if (z.is_infinite()) return 0.0;
    return bloch_wigner(z.value());
}

double five_term_defect(cplx x, cplx y) {
    constexpr double eps = 1e-15;
    const cplx one(1.0);
    if (std::abs(x) < eps || std::abs(y) < eps || std::abs(x - one) < eps || std::abs(y - one) < eps ||
        std::abs(one - x * y) < eps)
        throw std::domain_error("five_term_defect: degenerate arguments");
    const cplx q = one - x * y;
    return bloch_wigner(x) + bloch_wigner(y) + bloch_wigner(q) + bloch_wigner((one - x) / q) +
           bloch_wigner((one - y) / q);
}

QuadraticCharacter::QuadraticCharacter(int modulus, std::vector<int> values)
    : f_(modulus), values_(std::move(values)) {
    if (f_ < 3 || int(values_.size()) != f_)
        throw std::invalid_argument("QuadraticCharacter: table length must equal modulus >= 3");
    for (int k = 0; k < f_; ++k) {
        const int v = values_[k];
        if (v != -1 && v != 0 && v != 1)
            throw std::invalid_argument("QuadraticCharacter: values must lie in {-1,0,1}");
        if ((v == 0) != (std::gcd(k, f_) != 1))
            throw std::invalid_argument("QuadraticCharacter: zero pattern must match gcd(k,f) > 1");
    }
    for (int a = 0; a < f_; ++a)
        for (int b = a; b < f_; ++b)
            if (values_[(long long)a * b % f_] != values_[a] * values_[b])
                throw std::invalid_argument("QuadraticCharacter: table is not multiplicative");
    if (values_[f_ - 1] != -1) throw std::invalid_argument("QuadraticCharacter: character is not odd");
}

QuadraticCharacter QuadraticCharacter::chi_minus3() { return {3, {0, 1, -1}}; }
QuadraticCharacter QuadraticCharacter::chi_minus4() { return {4, {0, 1, 0, -1}}; }

namespace {

int jacobi(long long a, long long n) {
    a %= n;
    if (a < 0) a += n;
    int result = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            const long long r = n % 8;
            if (r == 3 || r == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

int kronecker(long long d, long long k) {
    if (k == 0) return (d == 1 || d == -1) ? 1 : 0;
    int result = 1;
    while (k % 2 == 0) {
        k /= 2;
        if (d % 2 == 0) return 0;
        const long long r = ((d % 8) + 8) % 8;
        if (r == 3 || r == 5) result = -result;
    }
    return result * jacobi(d, k);
}

}  // namespace

QuadraticCharacter QuadraticCharacter::from_discriminant(int d) {
    if (d >= 0) throw std::invalid_argument("from_discriminant: need a negative discriminant");
    const int f = -d;
    std::vector<int> v(f);
    for (int k = 0; k < f; ++k) v[k] = kronecker(d, k);
    return {f, std::move(v)};
}

int QuadraticCharacter::operator()(long long k) const {
    long long r = k % f_;
    if (r < 0) r += f_;
    return values_[r];
}

double dirichlet_lprime_minus1(const QuadraticCharacter& chi) {
    const int f = chi.modulus();
    double sum = 0.0;
    for (int k = 1; k <= f; ++k) {
        const int c = chi(k);
        if (c == 0) continue;
        sum += c * bloch_wigner(std::polar(1.0, 2.0 * kPi * k / f));
    }
    return f / (4.0 * kPi) * sum;
}

}  // namespace mlab
