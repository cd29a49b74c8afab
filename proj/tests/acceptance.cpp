// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Tolerances are pinned in code next to each check.

#include "cusplab/calculus.hpp"
#include "cusplab/ergodic.hpp"
#include "cusplab/extension.hpp"
#include "cusplab/families.hpp"
#include "cusplab/inducing.hpp"
#include "cusplab/numerics.hpp"

#include "oracle_tent_induced.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

using namespace cusplab;

namespace {

constexpr double kLn2 = 0.6931471805599453;

int g_failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail,
            double seconds) {
    std::printf("[%s] criterion %2d: %s (%s; %.2fs)\n", pass ? "PASS" : "FAIL", id,
                what.c_str(), detail.c_str(), seconds);
    if (!pass) ++g_failures;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g;
    for (int i = 0; i < n; ++i)
        g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    return g;
}

// ---------------------------------------------------------------------------

void criterion_1() {
    Timer t;
    double worst = 0.0;
    for (double a : {0.5, 1.0, 2.0}) {
        auto f = make_f_alpha(a);
        for (double x : log_grid(1e-6, 0.1, 600)) {
            double exact = std::pow(1.0 - std::pow(x, a) * kLn2, -(1.0 + a) / a);
            double got = std::exp(f.log_abs_deriv(x));
            worst = std::max(worst, std::abs(got - exact) / exact);
        }
    }
    report(1, worst < 1e-8, "closed-form derivative of f_alpha",
           "max rel err " + std::to_string(worst), t.elapsed());
}

void criterion_2() {
    Timer t;
    double worst = 0.0;
    for (double a : {0.5, 1.0, 2.0}) {
        auto g = make_g_alpha(a);
        ConjugacyKernel k(a);
        // fit inside the exact power-law zone x <= h(1/4)
        double hi = std::min(1e-4, 0.1 * k.value(0.25));
        auto xs = log_grid(hi * 1e-4, hi, 128);
        std::vector<double> lx, ly;
        for (double x : xs) {
            lx.push_back(std::log(x));
            ly.push_back(std::log(g.eval(x)));
        }
        worst = std::max(worst, std::abs(lsq_slope(lx, ly) - std::exp2(-a)));
    }
    report(2, worst < 1e-4, "power-law exponent of g_alpha at 0",
           "max |slope - 2^-a| " + std::to_string(worst), t.elapsed());
}

void criterion_3() {
    Timer t;
    bool pass = true;
    std::string detail;
    auto expect = [&](IntegrabilityVerdict v, bool divergent, const char* tag) {
        bool ok = divergent ? v.verdict == IntegrabilityVerdict::Kind::divergent
                            : v.verdict == IntegrabilityVerdict::Kind::convergent;
        if (v.verdict == IntegrabilityVerdict::Kind::inconclusive) ok = false;
        if (!ok) {
            pass = false;
            detail += std::string(tag) + " ratio=" + std::to_string(v.fitted_ratio) + " ";
        }
    };
    for (double a : {0.25, 0.5, 0.9, 1.0, 1.1, 1.5}) {
        auto g = make_g_alpha(a);
        Weight w{Weight::Kind::exact_density, make_kernel(a)};
        expect(singular_integral_classify(g, 0.0, Side::right, w, 8, 48), a >= 1.0,
               ("g_alpha " + std::to_string(a)).c_str());
        auto gb = make_g_b(1.8, a);
        Weight wl{Weight::Kind::lebesgue, nullptr};
        expect(singular_integral_classify(gb, 0.0, Side::both, wl, 8, 48), a >= 1.0,
               ("g_b " + std::to_string(a)).c_str());
    }
    if (detail.empty()) detail = "12 verdicts, 0 inconclusive";
    report(3, pass, "integrability threshold at alpha = 1", detail, t.elapsed());
}

// Criteria 4 and 10 share estimates; returned for reuse.
struct SharedEstimates {
    double chi_g05 = 0.0;
    double h_g05 = 0.0;
    double h_bern = 0.0;
    double chi_tent = 0.0;
};

void criterion_4(SharedEstimates& sh) {
    Timer t;
    auto g = make_g_alpha(0.5);
    ConjugacyKernel k(0.5);
    Rng rng(2026);
    double x0 = k.value(rng.uniform(1e-12, 1 - 1e-12));
    auto res = birkhoff_lyapunov(g, x0, 1000000, 0);
    sh.chi_g05 = res.chi;
    bool chi_ok = std::abs(res.chi - kLn2) < 0.01 * kLn2;

    bool periodic_ok = true;
    double worst = 0.0;
    for (int kk = 1; kk <= 6; ++kk) {
        for (double p : periodic_points(g, k, kk)) {
            double logd = 0.0, x = p;
            for (int i = 0; i < kk; ++i) {
                logd += g.log_abs_deriv(x);
                x = g.eval(x);
            }
            double rel = std::abs(logd - kk * kLn2) / (kk * kLn2);
            worst = std::max(worst, rel);
            if (rel > 1e-6) periodic_ok = false;
        }
    }
    report(4, chi_ok && periodic_ok, "Lyapunov exponent of the g_0.5 acip",
           "chi=" + std::to_string(res.chi) + " worst periodic rel=" +
               std::to_string(worst),
           t.elapsed());
}

void criterion_5(SharedEstimates& sh) {
    Timer t;
    std::vector<double> radii;
    for (int k = 3; k <= 19; ++k) radii.push_back(std::ldexp(1.0, -k));
    const double target = (-0.3 * std::log(0.3) - 0.7 * std::log(0.7)) / kLn2;

    auto samples = sample_bernoulli_measure(0.3, 50, 1000000, 12345);
    auto queries = sample_bernoulli_measure(0.3, 50, 200, 54321);
    auto d1 = local_dimension(queries, samples, radii);
    bool ok1 = std::abs(d1.pooled - target) < 0.03;

    ConjugacyKernel k(0.5);
    std::vector<double> ps, pq;
    for (double s : samples)
        if (s > 0 && s < 1) ps.push_back(k.value(s));
    for (double q : queries)
        if (q > 1e-6 && q < 1 - 1e-6) pq.push_back(k.value(q));
    auto d2 = local_dimension(pq, ps, radii);
    bool ok2 = std::abs(d2.pooled - target) < 0.03;

    Rng rng(777);
    std::vector<double> as, aq;
    for (int i = 0; i < 1000000; ++i) as.push_back(k.value(rng.uniform(1e-15, 1 - 1e-15)));
    for (int i = 0; i < 300; ++i) {
        double q = k.value(rng.uniform(1e-15, 1 - 1e-15));
        if (q > 0.02 && q < 0.98) aq.push_back(q);
    }
    auto d3 = local_dimension(aq, as, radii);
    bool ok3 = std::abs(d3.pooled - 1.0) < 0.03;

    sh.h_bern = target * kLn2; // reference entropy for the Ruelle pairs
    report(5, ok1 && ok2 && ok3, "dimension formula (local dimension = h/chi)",
           "bernoulli=" + std::to_string(d1.pooled) + " pushforward=" +
               std::to_string(d2.pooled) + " acip=" + std::to_string(d3.pooled) +
               " target=" + std::to_string(target),
           t.elapsed());
}

void criterion_6() {
    Timer t;
    auto oracle = tent_oracle::first_return_branches(tent_oracle::Rat(2, 5),
                                                     tent_oracle::Rat(4, 5), 12);
    std::sort(oracle.begin(), oracle.end(),
              [](const auto& a, const auto& b) { return a.lo < b.lo; });
    auto T = std::make_shared<const PiecewiseMap>(tent_map());
    auto imm = build_induced(T, OpenInterval(0.4, 0.8), 12, 1);
    bool match = imm.branches.size() == oracle.size();
    double worst = 0.0;
    if (match) {
        for (size_t i = 0; i < oracle.size(); ++i) {
            if (imm.branches[i].return_time != oracle[i].return_time) match = false;
            worst = std::max(worst,
                             std::abs(imm.branches[i].domain.lo - oracle[i].lo.value()));
            worst = std::max(worst,
                             std::abs(imm.branches[i].domain.hi - oracle[i].hi.value()));
        }
        if (worst > 1e-12) match = false;
    }
    auto imm16 = build_induced(T, OpenInterval(0.4, 0.8), 16, 1);
    auto st = markov_stats(imm16);
    bool kac_ok = std::abs(st.kac_sum - 1.0) < 0.02;
    bool res_ok = st.residual_measure < 0.01;
    report(6, match && kac_ok && res_ok, "induced Markov map vs cylinder oracle",
           "branches=" + std::to_string(imm.branches.size()) + " endpoint dev=" +
               std::to_string(worst) + " kac16=" + std::to_string(st.kac_sum) +
               " residual=" + std::to_string(st.residual_measure),
           t.elapsed());
}

void criterion_7() {
    Timer t;
    auto l1_of = [](const DensityEstimate& a, const DensityEstimate& b) {
        double l1 = 0.0;
        for (int i = 0; i < a.bin_count; ++i)
            l1 += std::abs(a.bin_masses[i] - b.bin_masses[i]);
        return l1;
    };

    auto T = std::make_shared<const PiecewiseMap>(tent_map());
    auto immT = build_induced(T, OpenInterval(0.4, 0.8), 14, 1);
    auto nuT = transfer_density(immT, 512, 5000);
    auto spT = spread_measure(immT, nuT.density, 1024);
    double l1_tent = compare_exact(spT.density, {ExactDensity::Kind::uniform, nullptr});
    double inv_tent = l1_of(transfer_step_ambient(*T, spT.density), spT.density);

    ConjugacyKernel k(0.5);
    auto G = std::make_shared<const PiecewiseMap>(make_g_alpha(0.5));
    auto immG = build_induced(G, OpenInterval(k.value(0.4), k.value(0.8)), 14, 1);
    auto nuG = transfer_density(immG, 512, 5000);
    auto spG = spread_measure(immG, nuG.density, 1024);
    double l1_g =
        compare_exact(spG.density, {ExactDensity::Kind::kernel_pull, make_kernel(0.5)});
    double inv_g = l1_of(transfer_step_ambient(*G, spG.density), spG.density);

    bool pass = l1_tent < 0.02 && inv_tent < 0.02 && l1_g < 0.06 && inv_g < 0.08;
    report(7, pass, "folklore density spreads to the known acip",
           "tent L1=" + std::to_string(l1_tent) + " inv=" + std::to_string(inv_tent) +
               " g L1=" + std::to_string(l1_g) + " inv=" + std::to_string(inv_g),
           t.elapsed());
}

void criterion_8() {
    Timer t;
    auto g = make_g_alpha(0.5);
    auto kern = make_kernel(0.5);
    int good = 0;
    for (uint64_t s = 1; s <= 20; ++s) {
        uint64_t seed = Rng::mix(1, s);
        Rng rng(seed);
        double y0 = kern->value(rng.uniform(1e-12, 1 - 1e-12));
        try {
            auto orbit =
                backward_orbit(g, y0, 60, PullbackPolicy::density_weighted, kern, seed);
            auto trace =
                pullback_interval(g, orbit, OpenInterval(y0 - 0.01, y0 + 0.01));
            std::vector<double> ns, ll;
            for (size_t n = 0; n < trace.lengths.size(); ++n) {
                if (trace.lengths[n] > 1e-12) {
                    ns.push_back(static_cast<double>(n));
                    ll.push_back(std::log(trace.lengths[n]));
                }
            }
            double slope = lsq_slope(ns, ll);
            if (std::abs(slope + kLn2) <= 0.05 &&
                trace.distortion_partial_sums.back() < kLn2)
                ++good;
        } catch (const MapError&) {
            // a degenerate fiber counts as a failed seed
        }
    }

    // tent control: exact halving, zero distortion
    auto T = tent_map();
    auto orbit = backward_orbit(T, 0.3, 40, PullbackPolicy::uniform_branch, nullptr, 17);
    auto trace = pullback_interval(T, orbit, OpenInterval(0.2, 0.4));
    bool tent_ok = trace.shrink_events == 0;
    for (size_t n = 0; n < trace.lengths.size(); ++n) {
        if (trace.lengths[n] != std::ldexp(0.2, -static_cast<int>(n))) tent_ok = false;
        if (trace.distortion_partial_sums[n] != 0.0) tent_ok = false;
    }

    report(8, good >= 18 && tent_ok, "pullback contraction and summable distortion",
           std::to_string(good) + "/20 seeds in band; tent control " +
               (tent_ok ? "exact" : "violated"),
           t.elapsed());
}

void criterion_9() {
    Timer t;
    bool pass = true;
    std::string detail;
    for (double a : {0.4, 0.5}) {
        auto s = infinite_exponent_series(a, 0.5, 0, 80);
        if (s.verdict != SeriesResult::Kind::divergent) {
            pass = false;
            detail += "alpha=" + std::to_string(a) + " not divergent ";
        }
    }
    for (double a : {0.6, 0.7, 0.9}) {
        auto s = infinite_exponent_series(a, 0.5, 0, 400);
        bool conv = s.verdict == SeriesResult::Kind::convergent;
        bool lo = std::abs(s.lower_partial_sums.back() - s.lower_limit) <=
                  1e-10 * s.lower_limit;
        bool hi = std::abs(s.upper_partial_sums.back() - s.upper_limit) <=
                  1e-10 * s.upper_limit;
        if (!(conv && lo && hi)) {
            pass = false;
            detail += "alpha=" + std::to_string(a) + " limit mismatch ";
        }
    }
    if (detail.empty()) detail = "verdicts and geometric limits agree";
    report(9, pass, "boundary-pole Lyapunov series threshold at alpha = 1/2", detail,
           t.elapsed());
}

void criterion_10(const SharedEstimates& sh) {
    Timer t;
    bool p1 = ruelle_check(sh.h_g05, sh.chi_g05, 0.02);
    bool p2 = ruelle_check(sh.h_bern, sh.chi_tent, 0.02);
    report(10, p1 && p2, "Ruelle inequality on every estimate pair",
           "h_g=" + std::to_string(sh.h_g05) + " chi_g=" + std::to_string(sh.chi_g05) +
               " h_bern=" + std::to_string(sh.h_bern) + " chi_tent=" +
               std::to_string(sh.chi_tent),
           t.elapsed());
}

} // namespace

int main() {
    SharedEstimates sh;
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4(sh);

    // entropy estimates reused by criterion 10
    {
        auto g = make_g_alpha(0.5);
        ConjugacyKernel k(0.5);
        std::vector<OpenInterval> part{OpenInterval(0.0, 0.5), OpenInterval(0.5, 1.0)};
        std::vector<int> ns{16};
        sh.h_g05 =
            entropy_word_count(g, part, k.value(0.2718281828), 1000000, ns).rates[0];
        auto T = tent_map();
        sh.chi_tent = birkhoff_lyapunov(T, 0.3141, 100000, 0).chi;
    }

    criterion_5(sh);
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10(sh);

    if (g_failures == 0) {
        std::printf("acceptance: all criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) failed\n", g_failures);
    return 1;
}
