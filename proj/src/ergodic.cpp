#include "cusplab/ergodic.hpp"

#include "cusplab/families.hpp"

#include "cusplab/numerics.hpp"
#include "cusplab/quadrature.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_set>

namespace cusplab {

namespace {
constexpr double kLn2 = 0.6931471805599453094172321214581766;

// One-ulp multiplicative jitter; falls back to the exact point when the
// perturbation would leave the branch structure (e.g. at nextafter(1,0)).
double jitter_step(const PiecewiseMap& map, double x, Rng& rng) {
    double xj = x * (1.0 + (rng.uniform() - 0.5) * 0x1p-51);
    return map.find_branch(xj) >= 0 ? xj : x;
}

uint64_t jitter_seed(double x0, long n) {
    return Rng::mix(std::bit_cast<uint64_t>(x0), static_cast<uint64_t>(n));
}
} // namespace

double ExactDensity::mass(double a, double b) const {
    switch (kind) {
    case Kind::uniform:
        return b - a;
    case Kind::kernel_pull: {
        // CDF of the pulled-back measure is h^{-1}.
        auto cdf = [&](double t) {
            if (t <= 0.0) return 0.0;
            if (t >= 1.0) return 1.0;
            return kernel->inverse(t);
        };
        return cdf(b) - cdf(a);
    }
    case Kind::kernel_push: {
        auto cdf = [&](double t) {
            if (t <= 0.0) return 0.0;
            if (t >= 1.0) return 1.0;
            return kernel->value(t);
        };
        return cdf(b) - cdf(a);
    }
    }
    return 0.0;
}

double compare_exact(const DensityEstimate& estimate, const ExactDensity& exact) {
    const double total = exact.mass(estimate.interval.lo, estimate.interval.hi);
    double l1 = 0.0;
    for (int i = 0; i < estimate.bin_count; ++i) {
        double a = estimate.interval.lo + i * estimate.bin_width();
        double b = a + estimate.bin_width();
        l1 += std::abs(estimate.bin_masses[i] - exact.mass(a, b) / total);
    }
    return l1;
}

BirkhoffResult birkhoff_lyapunov(const PiecewiseMap& map, double x0, long n, long burn_in,
                                 OrbitJitter jitter) {
    Rng rng(jitter_seed(x0, n + 31 * burn_in));
    double x = x0;
    for (long i = 0; i < burn_in; ++i) {
        x = orbit_step(map, x, i);
        if (jitter == OrbitJitter::resolution_floor) x = jitter_step(map, x, rng);
    }
    BirkhoffResult res;
    res.n = n;
    KahanSum acc;
    const long checkpoint = std::max<long>(1, n / 10);
    for (long i = 0; i < n; ++i) {
        double ld;
        try {
            ld = map.log_abs_deriv(x);
        } catch (const MapError&) {
            throw OrbitBreakError(map.name() + ": orbit break in birkhoff_lyapunov",
                                  burn_in + i);
        }
        acc.add(ld);
        if ((i + 1) % checkpoint == 0)
            res.running_averages.push_back(acc.value() / static_cast<double>(i + 1));
        x = orbit_step(map, x, burn_in + i);
        if (jitter == OrbitJitter::resolution_floor) x = jitter_step(map, x, rng);
    }
    res.chi = acc.value() / static_cast<double>(n);
    return res;
}

namespace {

// Annulus integrand for the classifier, as a function of the working
// coordinate t (ambient x for lebesgue; conjugacy coordinate u for
// exact_density, where |log|Df(h(u))|| = |log Dh(Tu) + log 2 - log Dh(u)|).
struct AnnulusIntegrand {
    const PiecewiseMap* map;
    const Weight* weight;

    double operator()(double t) const {
        if (weight->kind == Weight::Kind::lebesgue)
            return std::abs(map->log_abs_deriv(t));
        const ConjugacyKernel& k = *weight->kernel;
        double tu = tent(t);
        return std::abs(k.log_deriv(tu) + kLn2 - k.log_deriv(t));
    }
};

} // namespace

IntegrabilityVerdict singular_integral_classify(const PiecewiseMap& map,
                                                double singular_point, Side side,
                                                const Weight& weight, int k_lo,
                                                int k_hi) {
    if (k_hi <= k_lo) throw DomainError("classify: k range empty");
    if (weight.kind == Weight::Kind::exact_density && !weight.kernel)
        throw DomainError("classify: exact_density weight requires a kernel");

    // Working coordinate of the singular point.
    double center = singular_point;
    if (weight.kind == Weight::Kind::exact_density) {
        center = singular_point == 0.0
                     ? 0.0
                     : (singular_point == 1.0 ? 1.0 : weight.kernel->inverse(singular_point));
    }

    AnnulusIntegrand integrand{&map, &weight};
    auto annulus_ok = [&](double a, double b) {
        // No branch boundary may fall inside the (working-coordinate) annulus.
        if (weight.kind == Weight::Kind::lebesgue) {
            for (const auto& br : map.branches()) {
                if (a < br.domain.lo && br.domain.lo < b) return false;
                if (a < br.domain.hi && br.domain.hi < b) return false;
            }
            return map.find_branch(0.5 * (a + b)) >= 0;
        }
        // Conjugacy coordinate: the tent's branch point is 1/2.
        return !(a < 0.5 && 0.5 < b) && a > 0.0 && b < 1.0;
    };

    IntegrabilityVerdict v;
    v.k_lo = k_lo;
    v.k_hi = k_hi;
    const auto& gl = gauss64();
    for (int k = k_lo; k <= k_hi; ++k) {
        double r_in = std::ldexp(1.0, -(k + 1));
        double r_out = std::ldexp(1.0, -k);
        double sum = 0.0;
        bool any = false;
        if (side == Side::right || side == Side::both) {
            double a = center + r_in, b = center + r_out;
            if (!annulus_ok(a, b))
                throw GeometryError("classify: annulus crosses a branch boundary");
            sum += gl.integrate([&](double t) { return integrand(t); }, a, b);
            any = true;
        }
        if (side == Side::left || side == Side::both) {
            double a = center - r_out, b = center - r_in;
            if (!annulus_ok(a, b))
                throw GeometryError("classify: annulus crosses a branch boundary");
            sum += gl.integrate([&](double t) { return integrand(t); }, a, b);
            any = true;
        }
        if (!any) throw GeometryError("classify: no side selected");
        v.annulus_sums.push_back(sum);
        v.total += sum;
    }

    std::vector<double> ks, lnA, lnk;
    for (int k = k_lo; k <= k_hi; ++k) {
        double A = v.annulus_sums[k - k_lo];
        if (A <= 0.0) continue;
        ks.push_back(k);
        lnA.push_back(std::log(A));
        lnk.push_back(std::log(static_cast<double>(k)));
    }
    if (ks.size() < 4) throw NumericalError("classify: too few positive annulus sums");
    v.fitted_ratio = std::exp(lsq_slope(ks, lnA));
    v.fitted_exponent = lsq_slope(lnk, lnA);

    if (v.fitted_ratio <= 1.0 - 0.02)
        v.verdict = IntegrabilityVerdict::Kind::convergent;
    else if (v.fitted_ratio >= 1.0 - 0.005 && v.total >= 10.0 * v.annulus_sums.front())
        v.verdict = IntegrabilityVerdict::Kind::divergent;
    else
        v.verdict = IntegrabilityVerdict::Kind::inconclusive;
    return v;
}

WordCountResult word_count_rates(std::span<const int> symbols, int alphabet,
                                 std::span<const int> word_lengths) {
    int bits = 1;
    while ((1 << bits) < alphabet) ++bits;
    WordCountResult res;
    for (int n : word_lengths) {
        if (n * bits > 62)
            throw DomainError("word_count_rates: word does not fit in 64 bits");
        const uint64_t mask = (n * bits == 64) ? ~0ull : ((1ull << (n * bits)) - 1);
        std::unordered_set<uint64_t> words;
        words.reserve(std::min<size_t>(symbols.size(), 1u << 22));
        uint64_t w = 0;
        for (size_t i = 0; i < symbols.size(); ++i) {
            w = ((w << bits) | static_cast<uint64_t>(symbols[i])) & mask;
            if (i + 1 >= static_cast<size_t>(n)) words.insert(w);
        }
        res.word_lengths.push_back(n);
        res.distinct_counts.push_back(static_cast<long>(words.size()));
        res.rates.push_back(std::log(static_cast<double>(words.size())) / n);
    }
    return res;
}

WordCountResult entropy_word_count(const PiecewiseMap& map,
                                   std::span<const OpenInterval> partition, double x0,
                                   long orbit_length, std::span<const int> word_lengths,
                                   OrbitJitter jitter) {
    Rng rng(jitter_seed(x0, orbit_length));
    std::vector<int> symbols;
    symbols.reserve(orbit_length);
    long boundary_hits = 0;
    double x = x0;
    for (long i = 0; i < orbit_length; ++i) {
        int sym = -1;
        for (size_t j = 0; j < partition.size(); ++j) {
            if (partition[j].contains(x)) {
                sym = static_cast<int>(j);
                break;
            }
        }
        if (sym < 0) {
            // boundary hit: nudge and retry once
            ++boundary_hits;
            double xp = x + 1e-12;
            for (size_t j = 0; j < partition.size(); ++j)
                if (partition[j].contains(xp)) sym = static_cast<int>(j);
            if (sym < 0)
                throw OrbitBreakError(map.name() + ": point escaped the partition", i);
            x = xp;
        }
        symbols.push_back(sym);
        x = orbit_step(map, x, i);
        if (jitter == OrbitJitter::resolution_floor) x = jitter_step(map, x, rng);
    }
    auto res = word_count_rates(symbols, static_cast<int>(partition.size()), word_lengths);
    res.boundary_perturbations = boundary_hits;
    return res;
}

std::vector<int> bernoulli_itinerary(double p, long length, uint64_t seed) {
    Rng rng(seed);
    std::vector<int> symbols(length);
    for (long i = 0; i < length; ++i) symbols[i] = rng.bernoulli(p) ? 1 : 0;
    return symbols;
}

std::vector<double> sample_bernoulli_measure(double p, int depth, long count,
                                             uint64_t seed) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("sample_bernoulli_measure: p in (0,1)");
    if (depth < 40)
        throw DomainError("sample_bernoulli_measure: depth >= 40 for 64-bit resolution");
    Rng rng(seed);
    std::vector<double> out;
    out.reserve(count);
    std::vector<int> word(depth);
    for (long s = 0; s < count; ++s) {
        for (int i = 0; i < depth; ++i) word[i] = rng.bernoulli(p) ? 1 : 0;
        // Pull the cylinder back through the tent's inverse branches.
        double lo = 0.0, hi = 1.0;
        for (int i = depth - 1; i >= 0; --i) {
            if (word[i] == 0) {
                lo *= 0.5;
                hi *= 0.5;
            } else {
                double nlo = 1.0 - 0.5 * hi;
                double nhi = 1.0 - 0.5 * lo;
                lo = nlo;
                hi = nhi;
            }
        }
        out.push_back(0.5 * (lo + hi));
    }
    return out;
}

LocalDimensionResult local_dimension(std::span<const double> query_points,
                                     std::span<const double> samples,
                                     std::span<const double> radii) {
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());

    LocalDimensionResult res;
    KahanSum pooled;
    for (double x : query_points) {
        std::vector<double> lr, lf;
        for (double r : radii) {
            auto lo = std::lower_bound(sorted.begin(), sorted.end(), x - r);
            auto hi = std::upper_bound(sorted.begin(), sorted.end(), x + r);
            double frac = static_cast<double>(hi - lo) / n;
            if (frac <= 0.0) continue; // zero hits: radius dropped
            if (frac < 1e-4 || frac > 1e-1) continue;
            lr.push_back(std::log(r));
            lf.push_back(std::log(frac));
        }
        res.query_points.push_back(x);
        if (lr.size() >= 3) {
            double slope = lsq_slope(lr, lf);
            res.per_point_slope.push_back(slope);
            pooled.add(slope);
            res.usable_points++;
        } else {
            res.per_point_slope.push_back(std::nan(""));
        }
    }
    if (res.usable_points == 0)
        throw NumericalError("local_dimension: no query point had usable radii");
    res.pooled = pooled.value() / static_cast<double>(res.usable_points);
    return res;
}

DensityEstimate density_histogram(const PiecewiseMap& map, double x0, long n, int bins,
                                  OrbitJitter jitter) {
    Rng rng(jitter_seed(x0, n));
    DensityEstimate est{map.ambient(), bins, std::vector<double>(bins, 0.0), 0, false};
    std::vector<long> counts(bins, 0);
    double x = x0;
    long done = 0;
    for (long i = 0; i < n; ++i) {
        int bin = static_cast<int>((x - est.interval.lo) / est.bin_width());
        if (bin >= 0 && bin < bins) {
            counts[bin]++;
            done++;
        }
        try {
            x = map.eval(x);
        } catch (const MapError&) {
            est.orbit_broke = true;
            break;
        }
        if (jitter == OrbitJitter::resolution_floor) x = jitter_step(map, x, rng);
    }
    est.samples = done;
    if (done > 0)
        for (int i = 0; i < bins; ++i)
            est.bin_masses[i] = static_cast<double>(counts[i]) / static_cast<double>(done);
    return est;
}

SeriesResult infinite_exponent_series(double alpha, double p, int N, int terms) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw DomainError("infinite_exponent_series: construction requires 0 < alpha < 1");
    if (!(p > 0.0 && p < 1.0))
        throw DomainError("infinite_exponent_series: p must lie in (0,1)");
    if (N < 0 || terms < 1)
        throw DomainError("infinite_exponent_series: N >= 0 and terms >= 1");

    SeriesResult res;
    res.ratio = 1.0 / (2.0 * alpha);
    res.verdict = res.ratio >= 1.0 ? SeriesResult::Kind::divergent
                                   : SeriesResult::Kind::convergent;
    const double c = (alpha - 1.0) * std::log(p); // positive
    KahanSum lo_sum, hi_sum;
    double lo_term = c * std::ldexp(1.0, -(N + 1));         // i = 0 of the alpha^{-i} series
    double hi_term = lo_term / alpha;                       // i = 0 of the alpha^{-(i+1)} series
    for (int i = 0; i < terms; ++i) {
        lo_sum.add(lo_term);
        hi_sum.add(hi_term);
        res.lower_partial_sums.push_back(lo_sum.value());
        res.upper_partial_sums.push_back(hi_sum.value());
        lo_term *= res.ratio;
        hi_term *= res.ratio;
    }
    if (res.verdict == SeriesResult::Kind::convergent) {
        res.lower_limit = c * std::ldexp(1.0, -(N + 1)) / (1.0 - res.ratio);
        res.upper_limit = res.lower_limit / alpha;
    }
    return res;
}

bool ruelle_check(double h_estimate, double chi_estimate, double tolerance) {
    return h_estimate <= std::max(0.0, chi_estimate) + tolerance;
}

} // namespace cusplab
