#pragma once

#include "cusplab/interval.hpp"

#include <cmath>
#include <functional>
#include <utility>

namespace cusplab {

enum class Orientation { increasing, decreasing };

/// One-sided derivative behaviour at a branch endpoint.
enum class BoundaryTag { zero, plus_infinity, minus_infinity, finite };

/// A monotone C^1 branch of a piecewise map: a diffeomorphism from an open
/// interval onto its image. The value and log|derivative| callables must be
/// defined on the open domain; endpoints are never evaluated.
struct Branch {
    OpenInterval domain;
    Orientation orientation;
    std::function<double(double)> value;
    std::function<double(double)> log_abs_deriv;
    // Closure of the image interval; supplied by the family constructors
    // (they know the endpoint limits in closed form).
    double image_lo;
    double image_hi;
    BoundaryTag tag_lo = BoundaryTag::finite;
    BoundaryTag tag_hi = BoundaryTag::finite;

    double deriv_sign() const {
        return orientation == Orientation::increasing ? 1.0 : -1.0;
    }

    /// Signed derivative.
    double deriv(double x) const { return deriv_sign() * std::exp(log_abs_deriv(x)); }

    bool image_contains(double y) const { return image_lo < y && y < image_hi; }
};

/// Restriction of a branch to a subinterval of its domain (image bounds are
/// recomputed from the endpoint values). Handy for sampling checks near a
/// specific feature.
Branch restrict_branch(const Branch& b, OpenInterval sub);

} // namespace cusplab
