#include "cusplab/inducing.hpp"

#include "cusplab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <numeric>
#include <set>

namespace cusplab {

namespace {

long long igcd(long long a, long long b) {
    while (b) {
        long long t = a % b;
        a = b;
        b = t;
    }
    return a < 0 ? -a : a;
}

struct Rational {
    long long num, den; // den > 0, reduced
    Rational(long long n, long long d) {
        long long g = igcd(n, d);
        if (g == 0) g = 1;
        num = n / g;
        den = d / g;
        if (den < 0) {
            num = -num;
            den = -den;
        }
    }
    bool operator<(const Rational& o) const { return num * o.den < o.num * den; }
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

} // namespace

std::vector<double> periodic_points_tent(int k) {
    if (k < 1 || k > 24)
        throw DomainError("periodic_points_tent: supported periods are 1..24");
    std::set<std::pair<long long, long long>> found;
    const long long two_k = 1ll << k;
    for (long long word = 0; word < two_k; ++word) {
        // Affine composite T_w(x) = A x + B with A = +-2^k, B integer.
        long long A = 1, B = 0;
        for (int i = 0; i < k; ++i) {
            int s = static_cast<int>((word >> i) & 1);
            if (s == 0) {
                A = 2 * A;
                B = 2 * B;
            } else {
                A = -2 * A;
                B = 2 - 2 * B;
            }
        }
        // Fixed point x = B / (1 - A).
        Rational x(B, 1 - A);
        if (x.num < 0 || x.num > x.den) continue;
        // Verify the itinerary under closed branches, with exact arithmetic.
        long long p = x.num, q = x.den;
        // orbit stays on the lattice /q
        bool ok = true;
        long long pi = p;
        for (int i = 0; i < k && ok; ++i) {
            int s = static_cast<int>((word >> i) & 1);
            if (s == 0) {
                if (2 * pi > q) ok = false;
                pi = 2 * pi;
            } else {
                if (2 * pi < q) ok = false;
                pi = 2 * q - 2 * pi;
            }
        }
        if (!ok || pi != p) continue;
        found.insert({x.num, x.den});
    }
    std::vector<double> out;
    out.reserve(found.size());
    for (auto& [n, d] : found) out.push_back(static_cast<double>(n) / static_cast<double>(d));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> periodic_points(const PiecewiseMap& map, const ConjugacyKernel& kernel,
                                    int k) {
    std::vector<double> out;
    for (double t : periodic_points_tent(k)) {
        if (!(t > 0.0 && t < 1.0)) continue; // boundary fixed point has no interior image
        double p = kernel.value(t);
        // verify periodicity under the map itself
        double y = p;
        bool ok = true;
        for (int i = 0; i < k && ok; ++i) {
            try {
                y = map.eval(y);
            } catch (const MapError&) {
                ok = false;
            }
        }
        if (ok && std::abs(y - p) <= 1e-10) out.push_back(p);
    }
    std::sort(out.begin(), out.end());
    return out;
}

ReturningReport is_regularly_returning(const PiecewiseMap& map, OpenInterval U,
                                       long horizon) {
    const double tol = 1e-12;
    for (double endpoint : {U.lo, U.hi}) {
        std::vector<double> orbit{endpoint};
        bool escaped = false, periodic = false;
        for (long n = 1; n <= horizon; ++n) {
            double x;
            try {
                x = map.eval(orbit.back());
            } catch (const MapError&) {
                escaped = true; // never defined again; cannot re-enter
                break;
            }
            if (x > U.lo + tol && x < U.hi - tol)
                return {ReturningStatus::no, n};
            // periodicity: returned within tol of an earlier point
            for (double prev : orbit) {
                if (std::abs(x - prev) <= tol) {
                    periodic = true;
                    break;
                }
            }
            orbit.push_back(x);
            if (periodic) break;
        }
        if (!(periodic || escaped))
            return {ReturningStatus::yes_up_to_horizon, -1};
    }
    return {ReturningStatus::yes_certified, -1};
}

int InducedMarkovMap::find_branch(double x) const {
    for (size_t i = 0; i < branches.size(); ++i)
        if (branches[i].domain.contains(x)) return static_cast<int>(i);
    return -1;
}

double InducedMarkovMap::eval(double x) const {
    int b = find_branch(x);
    if (b < 0) throw UndefinedPointError("induced map: point not in any branch");
    return eval(b, x);
}

double InducedMarkovMap::eval(int branch, double x) const {
    double y = x;
    for (int i = 0; i < branches[branch].return_time; ++i) y = base->eval(y);
    return y;
}

double InducedMarkovMap::log_abs_deriv_phi(double x) const {
    int b = find_branch(x);
    if (b < 0) throw UndefinedPointError("induced map: point not in any branch");
    return log_abs_deriv_phi(b, x);
}

double InducedMarkovMap::log_abs_deriv_phi(int branch, double x) const {
    KahanSum acc;
    double y = x;
    for (int i = 0; i < branches[branch].return_time; ++i) {
        acc.add(base->log_abs_deriv(y));
        y = base->eval(y);
    }
    return acc.value();
}

double InducedMarkovMap::pullback(int branch, double y) const {
    const auto& br = branches[branch];
    double x = y;
    for (int i = br.return_time - 1; i >= 0; --i) {
        const Branch& step = base->branches()[br.word[i]];
        x = std::clamp(x, step.image_lo, step.image_hi);
        x = base->pullback(br.word[i], x);
    }
    return x;
}

namespace {

struct Piece {
    double img_lo, img_hi;
    std::vector<int> word;
    int returns_seen = 0;
};

// Image of the clipped overlap under one branch, handling clip endpoints that
// sit exactly on the branch-domain boundary (where only the limit exists).
std::pair<double, double> step_image(const Branch& br, double lo, double hi) {
    double a, b;
    if (lo <= br.domain.lo)
        a = br.orientation == Orientation::increasing ? br.image_lo : br.image_hi;
    else
        a = br.value(lo);
    if (hi >= br.domain.hi)
        b = br.orientation == Orientation::increasing ? br.image_hi : br.image_lo;
    else
        b = br.value(hi);
    return {std::min(a, b), std::max(a, b)};
}

InducedMarkovMap build_once(std::shared_ptr<const PiecewiseMap> map, OpenInterval U,
                            int max_depth, int r, std::vector<BuildSnapshot>* trace) {
    const double tol = 1e-9;
    InducedMarkovMap imm{map, U, {}, 0.0, 0.0, max_depth, r, false};

    std::vector<Piece> level{{U.lo, U.hi, {}, 0}};
    auto harvest = [&](const std::vector<int>& word) {
        InducedBranch ib{OpenInterval(0.0, 1.0), static_cast<int>(word.size()), word, 0.0,
                         0.0};
        double a = U.lo, b = U.hi;
        for (int i = static_cast<int>(word.size()) - 1; i >= 0; --i) {
            const Branch& step = map->branches()[word[i]];
            a = map->pullback(word[i], std::clamp(a, step.image_lo, step.image_hi));
            b = map->pullback(word[i], std::clamp(b, step.image_lo, step.image_hi));
        }
        double lo = std::min(a, b), hi = std::max(a, b);
        if (!(hi > lo)) return; // degenerate at double resolution
        ib.domain = OpenInterval(lo, hi);
        // onto check + expansion probe
        double dev = 0.0, min_logd = std::numeric_limits<double>::infinity();
        for (int j = 0; j <= 16; ++j) {
            double t = 0.5 * (1.0 + std::cos(M_PI * j / 16.0));
            double x = lo + (hi - lo) * std::clamp(t, 1e-6, 1.0 - 1e-6);
            try {
                KahanSum acc;
                double y = x;
                for (size_t s = 0; s < word.size(); ++s) {
                    acc.add(map->log_abs_deriv(y));
                    y = map->eval(y);
                }
                min_logd = std::min(min_logd, acc.value());
            } catch (const MapError&) {
                // probe orbit grazed a gap; neighbouring probes still bound lambda
            }
        }
        {
            double ya = lo, yb = hi;
            for (size_t s = 0; s < word.size(); ++s) {
                const Branch& step = map->branches()[word[s]];
                auto im = step_image(step, std::min(ya, yb), std::max(ya, yb));
                ya = im.first;
                yb = im.second;
            }
            dev = std::max(std::abs(std::min(ya, yb) - U.lo),
                           std::abs(std::max(ya, yb) - U.hi));
        }
        ib.onto_defect = dev;
        ib.min_abs_deriv = std::exp(min_logd);
        imm.branches.push_back(std::move(ib));
    };

    for (int depth = 1; depth <= max_depth; ++depth) {
        std::vector<Piece> next;
        for (const Piece& piece : level) {
            for (int b = 0; b < map->branch_count(); ++b) {
                const Branch& br = map->branches()[b];
                double clo = std::max(piece.img_lo, br.domain.lo);
                double chi = std::min(piece.img_hi, br.domain.hi);
                if (!(chi - clo > tol)) continue;
                auto [ilo, ihi] = step_image(br, clo, chi);
                Piece child{ilo, ihi, piece.word, piece.returns_seen};
                child.word.push_back(b);
                // classify against U
                if (ihi <= U.lo + tol || ilo >= U.hi - tol) {
                    next.push_back(std::move(child)); // missed U, keep refining
                    continue;
                }
                if (ilo <= U.lo + tol && ihi >= U.hi - tol) {
                    // covers U
                    if (child.returns_seen + 1 == r) {
                        harvest(child.word);
                    } else {
                        Piece middle = child;
                        middle.img_lo = U.lo;
                        middle.img_hi = U.hi;
                        middle.returns_seen++;
                        next.push_back(std::move(middle));
                    }
                    if (ilo < U.lo - tol) {
                        Piece side = child;
                        side.img_hi = U.lo;
                        next.push_back(std::move(side));
                    }
                    if (ihi > U.hi + tol) {
                        Piece side = child;
                        side.img_lo = U.hi;
                        next.push_back(std::move(side));
                    }
                    continue;
                }
                // Partial overlap: cannot form a Markov branch. Split off the
                // returning part (dropped, flagged) and keep the rest.
                imm.defect_pieces = true;
                if (ilo < U.lo - tol) {
                    Piece side = child;
                    side.img_hi = U.lo;
                    next.push_back(std::move(side));
                }
                if (ihi > U.hi + tol) {
                    Piece side = child;
                    side.img_lo = U.hi;
                    next.push_back(std::move(side));
                }
            }
        }
        level = std::move(next);
        if (trace) {
            double sum_len = 0.0, kac = 0.0, lmin = std::numeric_limits<double>::infinity();
            for (const auto& ib : imm.branches) {
                sum_len += ib.domain.length();
                kac += ib.return_time * ib.domain.length();
                lmin = std::min(lmin, ib.min_abs_deriv);
            }
            trace->push_back({depth, static_cast<long>(imm.branches.size()), kac,
                              U.length() - sum_len,
                              imm.branches.empty() ? 0.0 : lmin});
        }
        if (level.empty()) break;
    }

    double sum_len = 0.0;
    double lmin = std::numeric_limits<double>::infinity();
    for (const auto& ib : imm.branches) {
        sum_len += ib.domain.length();
        lmin = std::min(lmin, ib.min_abs_deriv);
    }
    imm.residual_measure = U.length() - sum_len;
    imm.lambda_min = imm.branches.empty() ? 0.0 : lmin;
    std::sort(imm.branches.begin(), imm.branches.end(),
              [](const InducedBranch& a, const InducedBranch& b) {
                  return a.domain.lo < b.domain.lo;
              });
    return imm;
}

} // namespace

InducedMarkovMap build_induced(std::shared_ptr<const PiecewiseMap> map, OpenInterval U,
                               int max_depth, int return_order,
                               std::vector<BuildSnapshot>* trace) {
    auto rr = is_regularly_returning(*map, U, 1000);
    if (rr.status == ReturningStatus::no)
        throw PreconditionError("build_induced: U is not regularly returning (witness n=" +
                                std::to_string(rr.witness) + ")");
    if (return_order < 1) throw DomainError("build_induced: return order must be >= 1");

    int r = return_order;
    for (;;) {
        if (trace) trace->clear();
        InducedMarkovMap imm = build_once(map, U, max_depth, r, trace);
        if (imm.branches.empty())
            throw NumericalError("build_induced: no branch found by max_depth");
        if (imm.lambda_min > 1.0 || r >= 16) return imm;
        // Expansion failed at this return order; take r-th returns further out.
        r *= 2;
    }
}

MarkovStats markov_stats(const InducedMarkovMap& imm, double holder_epsilon,
                         long holder_pairs, uint64_t seed) {
    MarkovStats st{0.0, imm.residual_measure, imm.lambda_min, {}};
    for (const auto& b : imm.branches) st.kac_sum += b.return_time * b.domain.length();
    st.holder.epsilon = holder_epsilon;
    Rng rng(seed);
    for (size_t i = 0; i < imm.branches.size(); ++i) {
        const auto& b = imm.branches[i];
        long pairs = std::max<long>(8, holder_pairs / static_cast<long>(imm.branches.size()));
        for (long p = 0; p < pairs; ++p) {
            double x = rng.uniform(b.domain.lo, b.domain.hi);
            double xp = rng.uniform(b.domain.lo, b.domain.hi);
            if (x == xp || !b.domain.contains(x) || !b.domain.contains(xp)) continue;
            int bi = static_cast<int>(i);
            double y = imm.eval(bi, x), yp = imm.eval(bi, xp);
            if (y == yp) continue;
            double dphi = std::exp(imm.log_abs_deriv_phi(bi, x));
            double dphip = std::exp(imm.log_abs_deriv_phi(bi, xp));
            double ratio =
                std::abs(dphi - dphip) / std::pow(std::abs(y - yp), holder_epsilon);
            st.holder.pairs++;
            if (ratio > st.holder.max_ratio) {
                st.holder.max_ratio = ratio;
                st.holder.witness_branch = static_cast<int>(i);
            }
        }
    }
    return st;
}

TransferResult transfer_density(const InducedMarkovMap& imm, int bins, int max_iterations) {
    if (imm.branches.empty() || !(imm.lambda_min > 1.0))
        throw PreconditionError("transfer_density: needs a nonempty expanding induced map");
    const OpenInterval& U = imm.U;
    const double bw = U.length() / bins;

    // Precompute, per branch and bin center y: the source bin of phi_i^{-1}(y)
    // and the weight 1/|Dphi(phi_i^{-1}(y))|.
    const size_t nb = imm.branches.size();
    std::vector<std::vector<int>> src(nb, std::vector<int>(bins));
    std::vector<std::vector<double>> wgt(nb, std::vector<double>(bins));
    for (size_t i = 0; i < nb; ++i) {
        const OpenInterval& dom = imm.branches[i].domain;
        for (int j = 0; j < bins; ++j) {
            double y = U.lo + (j + 0.5) * bw;
            double x = imm.pullback(static_cast<int>(i), y);
            // pullbacks of bin centers can land an ulp outside the domain
            x = std::clamp(x, std::nextafter(dom.lo, dom.hi), std::nextafter(dom.hi, dom.lo));
            int sj = std::clamp(static_cast<int>((x - U.lo) / bw), 0, bins - 1);
            src[i][j] = sj;
            wgt[i][j] = std::exp(-imm.log_abs_deriv_phi(static_cast<int>(i), x));
        }
    }

    TransferResult res{DensityEstimate{U, bins, std::vector<double>(bins, 0.0), 0, false},
                       false, 0.0, 0.0, 0};
    std::vector<double> rho(bins, 1.0 / U.length()), next(bins);
    for (int it = 0; it < max_iterations; ++it) {
        double mass_in = 0.0;
        for (int j = 0; j < bins; ++j) {
            double acc = 0.0;
            for (size_t i = 0; i < nb; ++i) acc += wgt[i][j] * rho[src[i][j]];
            next[j] = acc;
        }
        for (double v : next) mass_in += v * bw;
        res.escaped_mass = 1.0 - mass_in;
        double l1 = 0.0;
        for (int j = 0; j < bins; ++j) {
            next[j] /= mass_in; // renormalize each sweep
            l1 += std::abs(next[j] - rho[j]) * bw;
        }
        rho.swap(next);
        res.iterations = it + 1;
        res.last_change = l1;
        if (l1 < 1e-10) {
            res.converged = true;
            break;
        }
    }
    for (int j = 0; j < bins; ++j) res.density.bin_masses[j] = rho[j] * bw;
    return res;
}

namespace {

struct Depositor {
    const OpenInterval& ambient;
    int bins;
    std::vector<double>& mass;
    std::vector<uint8_t>& flags;

    void operator()(double lo, double hi, double m, bool flag) const {
        if (!(hi > lo) || !(m > 0.0)) return;
        const double bw = ambient.length() / bins;
        int j0 = std::clamp(static_cast<int>((lo - ambient.lo) / bw), 0, bins - 1);
        int j1 = std::clamp(static_cast<int>((hi - ambient.lo) / bw), 0, bins - 1);
        for (int j = j0; j <= j1; ++j) {
            double blo = ambient.lo + j * bw, bhi = blo + bw;
            double over = std::min(hi, bhi) - std::max(lo, blo);
            if (over <= 0.0) continue;
            mass[j] += m * over / (hi - lo);
            if (flag) flags[j] = 1;
        }
    }
};

// Push a cell forward `steps` times, depositing its mass once per level
// (including level 0). Cells are split at branch boundaries and kept below
// the ambient bin width so that the proportional deposit stays accurate;
// cells touching a branch boundary (a singularity of the derivative) flag
// the bins they subsequently feed.
void push_cell(const PiecewiseMap& map, double lo, double hi, double m, int steps,
               bool flagged, double cell_cap, const Depositor& dep, int guard = 0) {
    if (!(hi > lo) || !(m > 0.0)) return;
    if (guard > 200) { // pathological splitting; park the mass where it stands
        dep(lo, hi, m, true);
        return;
    }
    if (hi - lo > cell_cap) {
        double mid = 0.5 * (lo + hi);
        push_cell(map, lo, mid, 0.5 * m, steps, flagged, cell_cap, dep, guard + 1);
        push_cell(map, mid, hi, 0.5 * m, steps, flagged, cell_cap, dep, guard + 1);
        return;
    }
    for (const auto& br : map.branches()) {
        for (double cut : {br.domain.lo, br.domain.hi}) {
            if (lo < cut && cut < hi) {
                double frac = (cut - lo) / (hi - lo);
                push_cell(map, lo, cut, m * frac, steps, true, cell_cap, dep, guard + 1);
                push_cell(map, cut, hi, m * (1.0 - frac), steps, true, cell_cap, dep,
                          guard + 1);
                return;
            }
        }
    }
    dep(lo, hi, m, flagged);
    if (steps == 0) return;
    int b = map.find_branch(0.5 * (lo + hi));
    if (b < 0) return; // gap: only tolerance-level mass can land here
    const Branch& br = map.branches()[b];
    auto im = step_image(br, std::max(lo, br.domain.lo), std::min(hi, br.domain.hi));
    push_cell(map, im.first, im.second, m, steps - 1, flagged, cell_cap, dep, guard + 1);
}

} // namespace

SpreadResult spread_measure(const InducedMarkovMap& imm, const DensityEstimate& nu,
                            int ambient_bins) {
    const PiecewiseMap& map = *imm.base;
    const OpenInterval ambient = map.ambient();
    SpreadResult out{DensityEstimate{ambient, ambient_bins,
                                     std::vector<double>(ambient_bins, 0.0), 0, false},
                     std::vector<uint8_t>(ambient_bins, 0), 0.0};
    Depositor dep{ambient, ambient_bins, out.density.bin_masses, out.flagged_bins};
    const double cell_cap = ambient.length() / ambient_bins;

    // nu-mass of a subinterval of U from the binned density
    auto nu_mass = [&](double a, double b) {
        const double bw = nu.bin_width();
        double m = 0.0;
        int j0 = std::clamp(static_cast<int>((a - nu.interval.lo) / bw), 0, nu.bin_count - 1);
        int j1 = std::clamp(static_cast<int>((b - nu.interval.lo) / bw), 0, nu.bin_count - 1);
        for (int j = j0; j <= j1; ++j) {
            double blo = nu.interval.lo + j * bw, bhi = blo + bw;
            double over = std::min(b, bhi) - std::max(a, blo);
            if (over > 0.0) m += nu.bin_masses[j] * over / bw;
        }
        return m;
    };

    for (const auto& ib : imm.branches) {
        out.mass_kac += ib.return_time * nu_mass(ib.domain.lo, ib.domain.hi);
        // subdivide U_i into cells no wider than the ambient bin
        int cells = std::max(1, static_cast<int>(std::ceil(ib.domain.length() / cell_cap)));
        for (int c = 0; c < cells; ++c) {
            double a = ib.domain.lo + ib.domain.length() * c / cells;
            double b = ib.domain.lo + ib.domain.length() * (c + 1) / cells;
            double m = nu_mass(a, b);
            if (m > 0.0)
                push_cell(map, a, b, m, ib.return_time - 1, false, cell_cap, dep);
        }
    }
    if (!(out.mass_kac > 0.0))
        throw NumericalError("spread_measure: induced density carries no mass");
    double total = std::accumulate(out.density.bin_masses.begin(),
                                   out.density.bin_masses.end(), 0.0);
    for (auto& v : out.density.bin_masses) v /= total;
    return out;
}

DensityEstimate transfer_step_ambient(const PiecewiseMap& map, const DensityEstimate& rho) {
    DensityEstimate out{rho.interval, rho.bin_count,
                        std::vector<double>(rho.bin_count, 0.0), 0, false};
    const double bw = rho.bin_width();
    for (int j = 0; j < rho.bin_count; ++j) {
        double y = rho.interval.lo + (j + 0.5) * bw;
        double acc = 0.0;
        for (int b = 0; b < map.branch_count(); ++b) {
            const Branch& br = map.branches()[b];
            if (!br.image_contains(y)) continue;
            double x = map.pullback(b, y);
            int sj = std::clamp(static_cast<int>((x - rho.interval.lo) / bw), 0,
                                rho.bin_count - 1);
            acc += std::exp(-br.log_abs_deriv(x)) * rho.bin_masses[sj] / bw;
        }
        out.bin_masses[j] = acc * bw;
    }
    double total = std::accumulate(out.bin_masses.begin(), out.bin_masses.end(), 0.0);
    if (total > 0.0)
        for (auto& v : out.bin_masses) v /= total;
    return out;
}

} // namespace cusplab
