#include "cusplab/calculus.hpp"

#include "cusplab/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace cusplab {

namespace {
constexpr double kLn2 = 0.6931471805599453094172321214581766;
} // namespace

double c0_constant(double C, double epsilon) {
    if (!(C > 0.0) || !(epsilon > 0.0))
        throw DomainError("c0_constant: C and epsilon must be positive");
    const double a0 = 0.99 * kLn2;
    return 0.99 * std::min(a0, 0.5 / C);
}

std::pair<HolderReport, HolderReport> holder_check(const Branch& branch, double C,
                                                   double epsilon, long n_pairs,
                                                   uint64_t seed) {
    HolderReport small{HolderReport::Regime::small_derivative, 0, 0, 0, false, false,
                       C, epsilon, 0};
    HolderReport large{HolderReport::Regime::large_derivative, 0, 0, 0, false, false,
                       C, epsilon, 0};
    Rng rng(seed);
    const double lo = branch.domain.lo, hi = branch.domain.hi;
    for (long i = 0; i < n_pairs; ++i) {
        double x = rng.uniform(lo, hi);
        double xp = rng.uniform(lo, hi);
        if (x == xp || !branch.domain.contains(x) || !branch.domain.contains(xp)) continue;
        double dx = branch.deriv(x), dxp = branch.deriv(xp);
        double denom = std::pow(std::abs(x - xp), epsilon);
        if (std::abs(dx) <= 2.0 && std::abs(dxp) <= 2.0) {
            small.pairs_in_regime++;
            double ratio = std::abs(dx - dxp) / denom;
            if (ratio > small.max_ratio) {
                small.max_ratio = ratio;
                small.witness_x = x;
                small.witness_x_prime = xp;
            }
        }
        if (std::abs(dx) >= 0.5 && std::abs(dxp) >= 0.5) {
            large.pairs_in_regime++;
            double ratio = std::abs(1.0 / dx - 1.0 / dxp) / denom;
            if (ratio > large.max_ratio) {
                large.max_ratio = ratio;
                large.witness_x = x;
                large.witness_x_prime = xp;
            }
        }
    }
    small.regime_empty = small.pairs_in_regime == 0;
    large.regime_empty = large.pairs_in_regime == 0;
    small.pass = small.max_ratio <= C;
    large.pass = large.max_ratio <= C;
    return {small, large};
}

DistortionCheck distortion_bound_check(const PiecewiseMap& map, double x, double x_prime,
                                       double c, double C, double epsilon) {
    const double c0 = c0_constant(C, epsilon);
    if (!(c > 0.0 && c < c0))
        return {DistortionCheck::Status::preconditions_violated, "c outside (0, c0)"};
    const double gap = std::pow(std::abs(x - x_prime), epsilon);
    if (!(gap < c * c * c))
        return {DistortionCheck::Status::preconditions_violated, "|x-x'|^eps >= c^3"};

    int bx = map.branch_of(x); // throws UndefinedPointError on gaps
    double dfx = std::exp(map.log_abs_deriv(x));
    if (!(c < dfx && dfx < 1.0 / c))
        return {DistortionCheck::Status::preconditions_violated, "|Df(x)| outside (c, 1/c)"};

    int bxp = map.branch_of(x_prime);
    if (bx != bxp)
        return {DistortionCheck::Status::violated, "points on different branches"};

    double lhs = std::abs(map.log_abs_deriv(x) - map.log_abs_deriv(x_prime));
    double rhs = c * gap / (c * c * c);
    if (lhs <= rhs) return {DistortionCheck::Status::holds, "", lhs, rhs};
    return {DistortionCheck::Status::violated, "distortion inequality failed", lhs, rhs};
}

double log_deriv_iterate(const PiecewiseMap& map, double x, long n) {
    KahanSum acc;
    double y = x;
    for (long i = 0; i < n; ++i) {
        int b = -1;
        try {
            b = map.branch_of(y);
        } catch (const MapError&) {
            throw OrbitBreakError(map.name() + ": orbit break in log_deriv_iterate", i);
        }
        double ld = map.branches()[b].log_abs_deriv(y);
        if (!std::isfinite(ld))
            throw OrbitBreakError(map.name() + ": zero/infinite derivative on orbit", i);
        acc.add(ld);
        y = map.branches()[b].value(y);
    }
    return acc.value();
}

namespace {

// i-th derivative of f from the signed first derivative, central stencils
// with one Richardson step (error O(h^4) for the smooth families).
std::optional<double> higher_deriv(const PiecewiseMap& map, int branch, double x, int i,
                                   double h) {
    const Branch& b = map.branches()[branch];
    auto df = [&](double t) -> std::optional<double> {
        if (!b.domain.contains(t)) return std::nullopt;
        double ld = b.log_abs_deriv(t);
        if (!std::isfinite(ld)) return std::nullopt;
        return b.deriv_sign() * std::exp(ld);
    };
    auto stencil = [&](double step) -> std::optional<double> {
        switch (i) {
        case 2: {
            auto a = df(x + step), c = df(x - step);
            if (!a || !c) return std::nullopt;
            return (*a - *c) / (2.0 * step);
        }
        case 3: {
            auto a = df(x + step), m = df(x), c = df(x - step);
            if (!a || !m || !c) return std::nullopt;
            return (*a - 2.0 * *m + *c) / (step * step);
        }
        case 4: {
            auto a2 = df(x + 2 * step), a1 = df(x + step), c1 = df(x - step),
                 c2 = df(x - 2 * step);
            if (!a2 || !a1 || !c1 || !c2) return std::nullopt;
            return (*a2 - 2.0 * *a1 + 2.0 * *c1 - *c2) / (2.0 * step * step * step);
        }
        default:
            throw DomainError("cr_ratio_check: supported orders are r in [2,4]");
        }
    };
    auto coarse = stencil(h), fine = stencil(0.5 * h);
    if (!coarse || !fine) return std::nullopt;
    double v = (16.0 * *fine - *coarse) / 15.0;
    if (!std::isfinite(v)) return std::nullopt;
    return v;
}

} // namespace

CrRatioReport cr_ratio_check(const PiecewiseMap& map, int r, double p, double C,
                             std::span<const double> grid) {
    if (r < 2) throw DomainError("cr_ratio_check: r must be >= 2");
    if (!(p > 1.0)) throw DomainError("cr_ratio_check: p must exceed 1");
    CrRatioReport rep;
    for (double x : grid) {
        int branch = map.find_branch(x);
        if (branch < 0) {
            rep.skipped++;
            continue;
        }
        double adf = std::exp(map.branches()[branch].log_abs_deriv(x));
        double h = std::max(1e-6, 1e-4 * std::abs(x));
        for (int i = 2; i <= r; ++i) {
            auto di = higher_deriv(map, branch, x, i, h);
            if (!di) {
                rep.skipped++;
                continue;
            }
            rep.checked++;
            if (adf > 0.0 && adf <= 2.0) {
                rep.max_small_regime = std::max(rep.max_small_regime, std::abs(*di));
                if (std::abs(*di) >= C) rep.pass = false;
            }
            if (adf >= 2.0) {
                double ratio = std::abs(*di) / std::pow(adf, p);
                rep.max_large_ratio = std::max(rep.max_large_ratio, ratio);
                if (ratio >= C) rep.pass = false;
            }
        }
    }
    return rep;
}

} // namespace cusplab
