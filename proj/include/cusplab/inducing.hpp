#pragma once

#include "cusplab/ergodic.hpp"
#include "cusplab/kernel.hpp"
#include "cusplab/piecewise_map.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace cusplab {

/// Periodic points of the tent map of period k (k <= 24), found by
/// enumerating the 2^k itineraries; on each cylinder T^k is affine with
/// slope +-2^k, so the fixed point solves a linear equation in exact integer
/// arithmetic. Points whose exact orbit is inconsistent with the itinerary
/// (under closed branches) are discarded; duplicates merged.
std::vector<double> periodic_points_tent(int k);

/// Periodic points of a kernel-conjugate map: the tent points mapped through
/// h, restricted to the open interior. Each is verified periodic under the
/// map by forward iteration.
std::vector<double> periodic_points(const PiecewiseMap& map, const ConjugacyKernel& kernel,
                                    int k);

enum class ReturningStatus { yes_certified, yes_up_to_horizon, no };

struct ReturningReport {
    ReturningStatus status;
    long witness = -1; // first n with f^n(boundary) interior to U, when status == no
};

/// Checks f^n(dU) cap U = 0 for all n > 0 by iterating both boundary points.
/// Certified when both boundary orbits are detected periodic (return within
/// 1e-12 of an earlier point) with the full orbit avoiding the interior of U;
/// an orbit hitting an undefined point is treated as escaping.
ReturningReport is_regularly_returning(const PiecewiseMap& map, OpenInterval U,
                                       long horizon);

struct InducedBranch {
    OpenInterval domain; // U_i
    int return_time;     // n_i
    std::vector<int> word;
    double onto_defect;  // max endpoint deviation of f^{n_i}(U_i) from U
    double min_abs_deriv; // min |D f^{n_i}| over 17 probe points
};

/// Induced full expanding Markov map on U: disjoint U_i with f^{n_i} a
/// diffeomorphism from U_i onto U.
class InducedMarkovMap {
public:
    std::shared_ptr<const PiecewiseMap> base;
    OpenInterval U;
    std::vector<InducedBranch> branches;
    double residual_measure = 0.0; // |U| - sum |U_i| at the build depth
    double lambda_min = 0.0;       // min over branches of min |D f^{n_i}|
    int max_depth = 0;
    int return_order = 1;
    bool defect_pieces = false; // partial covers were seen (non-Markov geometry)

    int find_branch(double x) const;
    /// phi(x) = f^{n_i}(x) for x in U_i.
    double eval(double x) const;
    double eval(int branch, double x) const;
    double log_abs_deriv_phi(double x) const;
    double log_abs_deriv_phi(int branch, double x) const;
    /// phi_i^{-1}(y): pull y back through the branch word.
    double pullback(int branch, double y) const;
};

/// Per-depth snapshot emitted while building (one row per depth).
struct BuildSnapshot {
    int depth;
    long branch_count;
    double kac_sum;
    double residual;
    double lambda_min;
};

/// Builds the induced map by breadth-first refinement of subintervals of U:
/// a piece whose image under f^j covers U for the r-th time contributes the
/// pullback component of U as a branch with n_i = j; the remaining pieces are
/// refined up to max_depth. If r = 1 yields lambda_min <= 1 the builder
/// retries with r doubled (up to 16). Requires U regularly returning.
InducedMarkovMap build_induced(std::shared_ptr<const PiecewiseMap> map, OpenInterval U,
                               int max_depth, int return_order,
                               std::vector<BuildSnapshot>* trace = nullptr);

struct InducedHolderReport {
    double max_ratio = 0.0; // sup |Dphi(x)-Dphi(x')| / |phi(x)-phi(x')|^eps
    int witness_branch = -1;
    double epsilon = 0.0;
    long pairs = 0;
};

struct MarkovStats {
    double kac_sum;
    double residual_measure;
    double lambda_min;
    InducedHolderReport holder;
};

/// Kac sum, residual, expansion and the image-side regularity report.
MarkovStats markov_stats(const InducedMarkovMap& imm, double holder_epsilon = 0.5,
                         long holder_pairs = 2000, uint64_t seed = 1);

struct TransferResult {
    DensityEstimate density;
    bool converged = false;
    double last_change = 0.0;    // L1 change of the final sweep
    double escaped_mass = 0.0;   // per-sweep mass lost to the residual set
    int iterations = 0;
};

/// Invariant density of the induced map by transfer-operator iteration on
/// piecewise-constant densities, renormalizing each sweep; stops when the
/// L1 change drops below 1e-10 or at the iteration cap.
TransferResult transfer_density(const InducedMarkovMap& imm, int bins, int max_iterations);

struct SpreadResult {
    DensityEstimate density;            // on the ambient interval, mass 1
    std::vector<uint8_t> flagged_bins;  // received mass pushed across a singularity
    double mass_kac = 0.0;              // sum_i n_i nu(U_i), the normalizer
};

/// Spreads the induced invariant density nu to an f-invariant ambient
/// density: sum_i sum_{j<n_i} f^j_* nu|_{U_i}, normalized to a probability.
SpreadResult spread_measure(const InducedMarkovMap& imm, const DensityEstimate& nu,
                            int ambient_bins);

/// One sweep of the ambient transfer operator on a binned density (used to
/// check invariance of spread_measure output).
DensityEstimate transfer_step_ambient(const PiecewiseMap& map, const DensityEstimate& rho);

} // namespace cusplab
