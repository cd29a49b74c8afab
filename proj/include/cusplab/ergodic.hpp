#pragma once

#include "cusplab/kernel.hpp"
#include "cusplab/piecewise_map.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace cusplab {

/// Binned density on an interval; bin_masses sum to 1.
struct DensityEstimate {
    OpenInterval interval;
    int bin_count;
    std::vector<double> bin_masses;
    long samples = 0;
    bool orbit_broke = false;

    double bin_width() const { return interval.length() / bin_count; }
    double bin_center(int i) const { return interval.lo + (i + 0.5) * bin_width(); }
    /// Density value on bin i (mass / width).
    double density(int i) const { return bin_masses[i] / bin_width(); }
};

/// Closed-form reference densities for compare_exact.
struct ExactDensity {
    enum class Kind {
        uniform,
        kernel_pull, // density D(h^{-1}); invariant for h o T o h^{-1}
        kernel_push, // density Dh; invariant for h^{-1} o T o h
    };
    Kind kind = Kind::uniform;
    std::shared_ptr<const ConjugacyKernel> kernel;

    /// Exact mass of [a, b] under the normalized reference measure.
    double mass(double a, double b) const;
};

/// L1 distance between the estimated bin masses and the exact per-bin masses
/// (the exact masses integrate the closed-form density over each bin).
double compare_exact(const DensityEstimate& estimate, const ExactDensity& exact);

/// Orbit statistics apply a deterministic one-ulp multiplicative jitter each
/// step. Binary64 orbits of binary-exact maps (the tent map's branches are
/// dyadic-affine) otherwise collapse onto the branch boundary within ~53
/// steps, which is a measure-zero artefact of the float grid rather than a
/// property of the map. The jitter seed derives from the call arguments, so
/// repeated calls are byte-identical.
enum class OrbitJitter { none, resolution_floor };

struct BirkhoffResult {
    double chi = 0.0;
    std::vector<double> running_averages; // at n/10 checkpoints
    long n = 0;
};

/// Time average of log|Df| over the orbit of x0 after burn_in steps.
BirkhoffResult birkhoff_lyapunov(const PiecewiseMap& map, double x0, long n, long burn_in,
                                 OrbitJitter jitter = OrbitJitter::resolution_floor);

struct IntegrabilityVerdict {
    enum class Kind { convergent, divergent, inconclusive };
    Kind verdict = Kind::inconclusive;
    std::vector<double> annulus_sums; // contribution of scale-2^{-k} annuli
    double fitted_ratio = 0.0;        // geometric ratio from the LSQ fit of ln A_k vs k
    double fitted_exponent = 0.0;     // LSQ slope of ln A_k vs ln k (diagnostic)
    int k_lo = 0;
    int k_hi = 0;
    double total = 0.0;
};

enum class Side { left, right, both };

/// Integration weight for the singular-integral classifier. lebesgue
/// integrates |log|Df|| dx over dyadic annuli in ambient coordinates.
/// exact_density integrates against the invariant density D(h^{-1}) of the
/// kernel-conjugate map; the dyadic annuli are then taken in the conjugacy
/// coordinate u = h^{-1}(x) (same integral, and the only parametrization
/// whose annuli are representable in doubles at k ~ 48, since h(2^{-k})
/// underflows beyond k ~ 35).
struct Weight {
    enum class Kind { lebesgue, exact_density };
    Kind kind = Kind::lebesgue;
    std::shared_ptr<const ConjugacyKernel> kernel; // required for exact_density
};

/// Classifies the convergence of the singular integral of |log|Df|| near
/// singular_point by the fitted geometric decay of dyadic annulus sums:
/// convergent if the fitted ratio <= 0.98; divergent if >= 0.995 and the
/// total exceeds 10x the first annulus; inconclusive otherwise.
IntegrabilityVerdict singular_integral_classify(const PiecewiseMap& map,
                                                double singular_point, Side side,
                                                const Weight& weight, int k_lo, int k_hi);

struct WordCountResult {
    std::vector<int> word_lengths;
    std::vector<double> rates; // (1/n) ln #distinct n-words
    std::vector<long> distinct_counts;
    long boundary_perturbations = 0;
};

/// Distinct-word counting along the itinerary of the orbit of x0 with respect
/// to the given partition. Points landing on a partition boundary are nudged
/// by 1e-12 and counted.
WordCountResult entropy_word_count(const PiecewiseMap& map,
                                   std::span<const OpenInterval> partition, double x0,
                                   long orbit_length, std::span<const int> word_lengths,
                                   OrbitJitter jitter = OrbitJitter::resolution_floor);

/// Word counting on a caller-supplied symbol stream.
WordCountResult word_count_rates(std::span<const int> symbols, int alphabet,
                                 std::span<const int> word_lengths);

/// i.i.d. Bernoulli(p) symbol stream; this is exactly the tent itinerary of a
/// point sampled from the Bernoulli measure in the tent coding.
std::vector<int> bernoulli_itinerary(double p, long length, uint64_t seed);

/// Samples (cylinder midpoints of) the Bernoulli(p) measure in the tent
/// coding: each sample draws a symbol string of the given depth and pulls the
/// cylinder back through the tent's inverse branches.
std::vector<double> sample_bernoulli_measure(double p, int depth, long count,
                                             uint64_t seed);

struct LocalDimensionResult {
    std::vector<double> query_points;
    std::vector<double> per_point_slope; // NaN when too few radii were usable
    double pooled = 0.0;                 // mean of the usable per-point slopes
    long usable_points = 0;
};

/// Local dimension estimator: mu(B(x,r)) is the empirical fraction of samples
/// within r of x; the per-point slope fits log mu(B(x,r)) against log r over
/// radii whose fraction lies in [1e-4, 1e-1]; radii with zero hits are
/// dropped.
LocalDimensionResult local_dimension(std::span<const double> query_points,
                                     std::span<const double> samples,
                                     std::span<const double> radii);

/// Histogram of the forward orbit. On orbit break returns the partial
/// histogram with the break flag set.
DensityEstimate density_histogram(const PiecewiseMap& map, double x0, long n, int bins,
                                  OrbitJitter jitter = OrbitJitter::resolution_floor);

struct SeriesResult {
    enum class Kind { convergent, divergent };
    Kind verdict;
    double ratio; // 1/(2 alpha)
    std::vector<double> lower_partial_sums;
    std::vector<double> upper_partial_sums;
    // geometric limits; meaningful only in the convergent case
    double lower_limit = 0.0;
    double upper_limit = 0.0;
};

/// Bounding partial sums for the boundary-pole Lyapunov integral: terms
/// (alpha-1) ln p / alpha^i * 2^{-(i+N+1)} (lower) and the same with
/// alpha^{i+1} (upper). Both are geometric with ratio 1/(2 alpha), hence
/// divergent exactly when alpha <= 1/2.
SeriesResult infinite_exponent_series(double alpha, double p, int N, int terms);

/// h <= max(0, chi) + tolerance.
bool ruelle_check(double h_estimate, double chi_estimate, double tolerance);

} // namespace cusplab
