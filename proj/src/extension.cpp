#include "cusplab/extension.hpp"

#include "cusplab/numerics.hpp"

#include <cmath>

namespace cusplab {

BackwardOrbit backward_orbit(const PiecewiseMap& map, double y0, long n,
                             PullbackPolicy policy,
                             std::shared_ptr<const ConjugacyKernel> kernel,
                             uint64_t seed) {
    Rng rng(seed);
    BackwardOrbit orbit;
    orbit.points.push_back(y0);
    for (long step = 0; step < n; ++step) {
        double y = orbit.points.back();
        std::vector<int> cand;
        std::vector<double> pre, w;
        for (int b = 0; b < map.branch_count(); ++b) {
            const Branch& br = map.branches()[b];
            if (!br.image_contains(y)) continue;
            double x = map.pullback(b, y);
            if (!br.domain.contains(x)) continue;
            double weight = 1.0;
            if (policy == PullbackPolicy::density_weighted) {
                double log_rho = kernel ? kernel->log_deriv_inverse(x) : 0.0;
                weight = std::exp(log_rho - br.log_abs_deriv(x));
            }
            if (!(weight > 0.0) || !std::isfinite(weight)) continue;
            cand.push_back(b);
            pre.push_back(x);
            w.push_back(weight);
        }
        if (cand.empty())
            throw DeadEndError(map.name() + ": no admissible preimage", step);
        double total = 0.0;
        for (double v : w) total += v;
        double u = rng.uniform() * total;
        size_t pick = 0;
        double acc = 0.0;
        for (size_t i = 0; i < w.size(); ++i) {
            acc += w[i];
            if (u <= acc) {
                pick = i;
                break;
            }
        }
        orbit.points.push_back(pre[pick]);
        orbit.branch_indices.push_back(cand[pick]);
    }
    return orbit;
}

namespace {

double chebyshev_sup(const Branch& br, double lo, double hi, double ref_logd) {
    if (!(hi > lo)) return 0.0;
    double sup = 0.0;
    for (int j = 0; j <= 16; ++j) {
        double t = 0.5 * (1.0 + std::cos(M_PI * j / 16.0));
        double x = lo + (hi - lo) * t;
        if (!br.domain.contains(x)) continue;
        sup = std::max(sup, std::abs(br.log_abs_deriv(x) - ref_logd));
    }
    return sup;
}

} // namespace

PullbackTrace pullback_interval(const PiecewiseMap& map, const BackwardOrbit& orbit,
                                OpenInterval V) {
    const double y0 = orbit.points.front();
    if (!V.contains(y0))
        throw DomainError("pullback_interval: V must contain y_0");
    if (!map.ambient().contains(V))
        throw DomainError("pullback_interval: V escapes the ambient interval");

    double radius = std::min(y0 - V.lo, V.hi - y0);
    int shrinks = 0;
    for (;;) {
        if (radius < 1e-12)
            throw NumericalError("pullback_interval: admissible radius underflowed");
        PullbackTrace trace;
        trace.shrink_events = shrinks;
        trace.final_radius = radius;
        double lo = y0 - radius, hi = y0 + radius;
        trace.intervals.emplace_back(lo, hi);
        trace.lengths.push_back(hi - lo);
        trace.distortion_partial_sums.push_back(0.0);
        KahanSum dist;
        bool crossed = false;
        for (size_t i = 0; i < orbit.branch_indices.size(); ++i) {
            const Branch& br = map.branches()[orbit.branch_indices[i]];
            if (!(br.image_lo < lo && hi < br.image_hi)) {
                crossed = true;
                break;
            }
            double a = map.pullback(orbit.branch_indices[i], lo);
            double b = map.pullback(orbit.branch_indices[i], hi);
            double nlo = std::min(a, b), nhi = std::max(a, b);
            double yi = orbit.points[i + 1];
            dist.add(chebyshev_sup(br, nlo, nhi, br.log_abs_deriv(yi)));
            trace.distortion_partial_sums.push_back(dist.value());
            trace.lengths.push_back(nhi - nlo);
            // Below double resolution both endpoints collide; keep a one-ulp
            // placeholder so the interval list stays well-formed.
            if (!(nhi > nlo)) nhi = std::nextafter(nlo, br.domain.hi);
            trace.intervals.emplace_back(nlo, nhi);
            lo = nlo;
            hi = nhi;
        }
        if (!crossed) return trace;
        radius *= 0.5;
        ++shrinks;
    }
}

} // namespace cusplab
