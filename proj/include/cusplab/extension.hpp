#pragma once

#include "cusplab/kernel.hpp"
#include "cusplab/piecewise_map.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace cusplab {

/// Finite fiber of the natural extension: points (y_0, ..., y_n) with
/// f(y_{i+1}) = y_i, plus the branch used to invert at each step
/// (branch_indices[i] is the branch containing y_{i+1}).
struct BackwardOrbit {
    std::vector<double> points;
    std::vector<int> branch_indices;
};

enum class PullbackPolicy { uniform_branch, density_weighted };

/// Samples a backward orbit of length n from y0. uniform_branch picks any
/// branch whose open image contains the current point with equal probability.
/// density_weighted weights candidate preimages w by rho(w)/|Df(w)| with rho
/// the kernel's invariant density D(h^{-1}) (the backward transition kernel
/// of the stationary chain); when no kernel is given, rho = 1 (Lebesgue).
BackwardOrbit backward_orbit(const PiecewiseMap& map, double y0, long n,
                             PullbackPolicy policy,
                             std::shared_ptr<const ConjugacyKernel> kernel,
                             uint64_t seed);

/// Record of pulling an interval V around y_0 back along a backward orbit.
/// lengths[i] = |V_i| (0 once both endpoints collide at double resolution,
/// ~1e-16 relative; slope fits should ignore lengths below ~1e-12);
/// distortion_partial_sums[i] = sum over steps 1..i of the sup over 17
/// Chebyshev probe points x' of V_j of |log|Df(x')| - log|Df(y_j)||.
struct PullbackTrace {
    std::vector<OpenInterval> intervals;
    std::vector<double> lengths;
    std::vector<double> distortion_partial_sums;
    double final_radius = 0.0; // the empirically admissible radius around y_0
    int shrink_events = 0;
};

/// Pulls V back along the recorded branches. Whenever a pullback would cross
/// the chosen branch's domain boundary (V_i not strictly inside the branch
/// image), halves V toward y_0 and restarts; throws NumericalError once the
/// radius underflows 1e-12.
PullbackTrace pullback_interval(const PiecewiseMap& map, const BackwardOrbit& orbit,
                                OpenInterval V);

} // namespace cusplab
