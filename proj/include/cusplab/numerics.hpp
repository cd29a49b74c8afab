#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace cusplab {

/// Neumaier-compensated accumulator. Used everywhere an orbit sum of
/// log-derivatives is formed, so that 1e6-term sums keep ~1 ulp accuracy.
class KahanSum {
public:
    void add(double value) {
        double t = sum_ + value;
        if (std::abs(sum_) >= std::abs(value))
            comp_ += (sum_ - t) + value;
        else
            comp_ += (value - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Deterministic RNG used throughout. mt19937_64 is fully specified by the
/// standard; uniform doubles are derived by hand so that output streams are
/// identical across platforms and standard-library versions.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    uint64_t next_u64() {
        // xorshift* keeps the generator header-only and byte-reproducible.
        uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 0x2545f4914f6cdd1dull;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    /// splitmix64-style mixer for deriving stream seeds from (seed, tag) pairs.
    static uint64_t mix(uint64_t a, uint64_t b) {
        uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

private:
    uint64_t state_;
};

/// Least-squares slope of y against x.
inline double lsq_slope(std::span<const double> x, std::span<const double> y) {
    const size_t n = x.size();
    double mx = 0, my = 0;
    for (size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

/// x^y via exp2/log2. Routing all fractional powers through the same base-2
/// path makes identities such as h(1/2) = 1/2 hold bit-exactly, because the
/// kernel's scaling constant is built from the identical exp2 call.
inline double pow2_path(double x, double y) {
    return std::exp2(y * std::log2(x));
}

} // namespace cusplab
