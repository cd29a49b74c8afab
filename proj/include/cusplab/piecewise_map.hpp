#pragma once

#include "cusplab/branch.hpp"

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace cusplab {

enum class MapKind { plain, cusp };

/// Piecewise monotone interval map: ordered monotone branches on pairwise
/// disjoint open subintervals of a compact ambient interval. Evaluation at a
/// gap (including branch endpoints) raises UndefinedPointError. Immutable
/// after construction; safe for unrestricted concurrent reads.
class PiecewiseMap {
public:
    PiecewiseMap(std::string name, OpenInterval ambient, std::vector<Branch> branches,
                 MapKind kind);

    const std::string& name() const { return name_; }
    const OpenInterval& ambient() const { return ambient_; }
    MapKind kind() const { return kind_; }
    std::span<const Branch> branches() const { return branches_; }
    int branch_count() const { return static_cast<int>(branches_.size()); }

    /// Index of the branch whose open domain contains x, or -1.
    int find_branch(double x) const;

    /// Like find_branch but raises: DomainError outside the ambient closure,
    /// UndefinedPointError in a gap.
    int branch_of(double x) const;

    double eval(double x) const;
    double log_abs_deriv(double x) const;
    /// Signed derivative.
    double deriv(double x) const;

    /// Unique x in the indexed branch's domain with f(x) = y. Bisection on
    /// the monotone branch to 1e-14 absolute, then one Newton polish step
    /// when the derivative is finite and nonzero.
    double pullback(int branch, double y) const;

    /// Checks that derivative samples approaching each tagged endpoint trend
    /// monotonically toward the tag, on the geometric sequence
    /// endpoint +- 2^{-k} |domain|, k = 4..40. Used by the validity tests.
    bool boundary_tags_consistent() const;

private:
    std::string name_;
    OpenInterval ambient_;
    std::vector<Branch> branches_;
    MapKind kind_;
};

/// Convenience: orbit step that throws OrbitBreakError carrying the break
/// index when the orbit leaves the branch structure.
double orbit_step(const PiecewiseMap& map, double x, long index);

} // namespace cusplab
