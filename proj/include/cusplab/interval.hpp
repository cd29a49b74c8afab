#pragma once

#include "cusplab/errors.hpp"

namespace cusplab {

/// Open interval (lo, hi) in ambient coordinates, lo < hi strictly.
struct OpenInterval {
    double lo;
    double hi;

    OpenInterval(double lo_, double hi_) : lo(lo_), hi(hi_) {
        if (!(lo < hi))
            throw DomainError("OpenInterval requires lo < hi");
    }

    double length() const { return hi - lo; }
    double midpoint() const { return 0.5 * (lo + hi); }

    bool contains(double x) const { return lo < x && x < hi; }
    bool contains(const OpenInterval& other) const {
        return lo <= other.lo && other.hi <= hi;
    }
    bool intersects(const OpenInterval& other) const {
        return lo < other.hi && other.lo < hi;
    }
};

} // namespace cusplab
