#pragma once
// Shared generators for the property tests.

#include <cmath>
#include <complex>
#include <random>
#include <string>

namespace testsupport {

using cplx = std::complex<double>;

inline std::string data_dir() { return MLAB_DATA_DIR; }

struct Gen {
    std::mt19937_64 rng;
    explicit Gen(std::uint64_t seed) : rng(seed) {}

    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }
    /// Uniform in the disk |z| <= r.
    cplx disk(double r) {
        const double rho = r * std::sqrt(uniform(0.0, 1.0));
        return std::polar(rho, uniform(-M_PI, M_PI));
    }
    /// Modulus log-uniform in [lo, hi].
    cplx annulus(double lo, double hi) {
        return std::polar(std::exp(uniform(std::log(lo), std::log(hi))), uniform(-M_PI, M_PI));
    }
    cplx unit() { return std::polar(1.0, uniform(-M_PI, M_PI)); }
};

}  // namespace testsupport
