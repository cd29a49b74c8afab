#include "cusplab/piecewise_map.hpp"

#include <algorithm>
#include <cmath>

namespace cusplab {

PiecewiseMap::PiecewiseMap(std::string name, OpenInterval ambient,
                           std::vector<Branch> branches, MapKind kind)
    : name_(std::move(name)), ambient_(ambient), branches_(std::move(branches)), kind_(kind) {
    if (branches_.empty())
        throw DomainError("PiecewiseMap: at least one branch required");
    std::sort(branches_.begin(), branches_.end(),
              [](const Branch& a, const Branch& b) { return a.domain.lo < b.domain.lo; });
    for (size_t i = 0; i < branches_.size(); ++i) {
        const auto& d = branches_[i].domain;
        if (d.lo < ambient_.lo - 1e-15 || d.hi > ambient_.hi + 1e-15)
            throw DomainError("PiecewiseMap: branch domain escapes the ambient interval");
        if (i > 0 && branches_[i - 1].domain.hi > d.lo + 1e-15)
            throw DomainError("PiecewiseMap: branch domains overlap");
    }
    if (kind_ == MapKind::cusp) {
        for (const auto& b : branches_)
            if (b.tag_lo == BoundaryTag::finite || b.tag_hi == BoundaryTag::finite)
                throw DomainError("PiecewiseMap: cusp kind requires non-finite boundary tags");
    }
}

int PiecewiseMap::find_branch(double x) const {
    // branches are sorted; binary search on domain.lo
    int lo = 0, hi = branch_count() - 1, found = -1;
    while (lo <= hi) {
        int mid = (lo + hi) / 2;
        if (branches_[mid].domain.lo < x) {
            found = mid;
            lo = mid + 1;
        } else {
            hi = mid - 1;
        }
    }
    if (found >= 0 && branches_[found].domain.contains(x)) return found;
    return -1;
}

int PiecewiseMap::branch_of(double x) const {
    if (x < ambient_.lo || x > ambient_.hi)
        throw DomainError(name_ + ": point outside the ambient interval");
    int b = find_branch(x);
    if (b < 0)
        throw UndefinedPointError(name_ + ": point lies in a gap between branches");
    return b;
}

double PiecewiseMap::eval(double x) const { return branches_[branch_of(x)].value(x); }

double PiecewiseMap::log_abs_deriv(double x) const {
    return branches_[branch_of(x)].log_abs_deriv(x);
}

double PiecewiseMap::deriv(double x) const {
    const Branch& b = branches_[branch_of(x)];
    return b.deriv_sign() * std::exp(b.log_abs_deriv(x));
}

double PiecewiseMap::pullback(int branch, double y) const {
    if (branch < 0 || branch >= branch_count())
        throw DomainError(name_ + ": branch index out of range");
    const Branch& b = branches_[branch];
    if (!(b.image_lo <= y && y <= b.image_hi))
        throw NoPreimageError(name_ + ": value outside the branch image");
    const bool inc = b.orientation == Orientation::increasing;
    double lo = b.domain.lo, hi = b.domain.hi;
    // Bisect without ever evaluating at the endpoints; the bracket invariant
    // follows from monotonicity.
    while (hi - lo > 1e-14) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break; // resolution limit
        double fm = b.value(mid);
        if ((fm < y) == inc)
            lo = mid;
        else
            hi = mid;
    }
    double x = 0.5 * (lo + hi);
    double d = b.deriv(x);
    if (std::isfinite(d) && d != 0.0) {
        double x2 = x - (b.value(x) - y) / d;
        if (b.domain.contains(x2)) x = x2;
    }
    return x;
}

bool PiecewiseMap::boundary_tags_consistent() const {
    for (const auto& b : branches_) {
        const double len = b.domain.length();
        for (int side = 0; side < 2; ++side) {
            const BoundaryTag tag = side == 0 ? b.tag_lo : b.tag_hi;
            std::vector<double> ld;
            for (int k = 4; k <= 40; ++k) {
                double off = std::ldexp(len, -k);
                double x = side == 0 ? b.domain.lo + off : b.domain.hi - off;
                if (!b.domain.contains(x)) continue;
                ld.push_back(b.log_abs_deriv(x)); // k grows => x approaches endpoint
            }
            if (ld.size() < 4) return false;
            // The samples are ordered toward the endpoint.
            bool ok = true;
            switch (tag) {
            case BoundaryTag::zero:
                for (size_t i = 1; i < ld.size(); ++i) ok &= ld[i] <= ld[i - 1] + 1e-9;
                ok &= ld.back() < ld.front() - 1.0;
                break;
            case BoundaryTag::plus_infinity:
            case BoundaryTag::minus_infinity: {
                for (size_t i = 1; i < ld.size(); ++i) ok &= ld[i] >= ld[i - 1] - 1e-9;
                ok &= ld.back() > ld.front() + 1.0;
                // sign of the derivative must match the tag
                double sgn = b.deriv_sign();
                ok &= (tag == BoundaryTag::plus_infinity) == (sgn > 0.0);
                break;
            }
            case BoundaryTag::finite: {
                double spread = *std::max_element(ld.begin(), ld.end()) -
                                *std::min_element(ld.begin(), ld.end());
                ok = spread < 5.0 && std::isfinite(ld.back());
                break;
            }
            }
            if (!ok) return false;
        }
    }
    return true;
}

double orbit_step(const PiecewiseMap& map, double x, long index) {
    try {
        return map.eval(x);
    } catch (const MapError&) {
        throw OrbitBreakError(map.name() + ": orbit break", index);
    }
}

} // namespace cusplab
