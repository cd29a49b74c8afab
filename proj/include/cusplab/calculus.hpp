#pragma once

#include "cusplab/piecewise_map.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cusplab {

/// Largest admissible distortion constant: c0 = 0.99 min(0.99 ln 2, 1/(2C)).
/// Any a0 < ln 2 satisfies ln(1 - a/2) > -a below it (the root of
/// ln(1-a/2)+a is ~1.59 > ln 2), so a0 = 0.99 ln 2 is taken; the second term
/// enforces C c0 < 1/2. Result lies in (0, ln 2).
double c0_constant(double C, double epsilon);

struct HolderReport {
    enum class Regime { small_derivative, large_derivative };
    Regime regime;
    double max_ratio = 0.0; // sup |phi(x)-phi(x')| / |x-x'|^eps over sampled pairs
    double witness_x = 0.0;
    double witness_x_prime = 0.0;
    bool pass = false; // max_ratio <= C
    bool regime_empty = false;
    double C = 0.0;
    double epsilon = 0.0;
    long pairs_in_regime = 0;
};

/// Samples n_pairs point pairs in the branch domain and checks the two
/// one-sided regularity conditions: phi = Df on { |Df| <= 2 } and
/// phi = 1/Df on { |Df| >= 1/2 }. Deterministic under the seed.
std::pair<HolderReport, HolderReport> holder_check(const Branch& branch, double C,
                                                   double epsilon, long n_pairs,
                                                   uint64_t seed);

struct DistortionCheck {
    enum class Status { holds, preconditions_violated, violated };
    Status status;
    std::string detail; // which precondition failed, when applicable
    double lhs = 0.0;   // | log|Df(x)| - log|Df(x')| |
    double rhs = 0.0;   // c |x-x'|^eps / c^3
};

/// Checks the distortion inequality
///   |log|Df(x)| - log|Df(x')|| <= c |x-x'|^eps / c^3
/// under the preconditions 0 < c < c0(C,eps), |x-x'|^eps < c^3 and
/// c < |Df(x)| < 1/c, which also force x, x' onto the same branch.
DistortionCheck distortion_bound_check(const PiecewiseMap& map, double x, double x_prime,
                                       double c, double C, double epsilon);

/// Sum_{i<n} log|Df(f^i(x))| with compensated accumulation. Throws
/// OrbitBreakError (carrying the break index) if the orbit leaves the branch
/// structure.
double log_deriv_iterate(const PiecewiseMap& map, double x, long n);

struct CrRatioReport {
    bool pass = true;
    double max_small_regime = 0.0; // max |D^i f| where 0 < |Df| <= 2
    double max_large_ratio = 0.0;  // max |D^i f| / |Df|^p where |Df| >= 2
    long skipped = 0;              // underflowed finite-difference stencils
    long checked = 0;
};

/// Higher-derivative growth check: |D^i f| < C where |Df| <= 2 and
/// |D^i f| / |Df|^p < C where |Df| >= 2, for 2 <= i <= r, on the given grid.
/// D^i f is obtained from the closed-form first derivative by central
/// differences with one Richardson extrapolation step,
/// h = max(1e-6, 1e-4 |x|).
CrRatioReport cr_ratio_check(const PiecewiseMap& map, int r, double p, double C,
                             std::span<const double> grid);

} // namespace cusplab
