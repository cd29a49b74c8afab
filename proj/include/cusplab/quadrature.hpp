#pragma once

#include <functional>
#include <span>
#include <vector>

namespace cusplab {

/// Gauss-Legendre rule on [-1, 1]. Nodes and weights are computed once by
/// Newton iteration on the Legendre recurrence (machine precision).
class GaussLegendre {
public:
    explicit GaussLegendre(int n);

    /// Integrate f over [a, b].
    double integrate(const std::function<double(double)>& f, double a, double b) const;

    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> weights() const { return weights_; }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/// Shared 64-node rule; the per-annulus integrands are smooth so this is
/// accurate to ~1e-15 relative.
const GaussLegendre& gauss64();

} // namespace cusplab
