#include "cusplab/families.hpp"
#include "cusplab/numerics.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace cusplab;

namespace {
constexpr double kLn2 = 0.6931471805599453;

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g;
    for (int i = 0; i < n; ++i)
        g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    return g;
}
} // namespace

TEST_CASE("tent map basics") {
    auto T = tent_map();
    CHECK(T.eval(0.25) == 0.5);
    CHECK(T.eval(0.75) == 0.5);
    CHECK(T.eval(2.0 / 3.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(tent(0.25) == 0.5);
    CHECK_THROWS_AS(tent(-0.1), DomainError);
    CHECK_THROWS_AS(tent(1.5), DomainError);
    CHECK_THROWS_AS(T.eval(-0.1), DomainError);
    CHECK_THROWS_AS(T.eval(0.5), UndefinedPointError); // branch boundary is a gap
    CHECK(T.boundary_tags_consistent());
}

TEST_CASE("pullback on monotone branches") {
    auto T = tent_map();
    CHECK(T.pullback(0, 0.5) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(T.pullback(1, 0.5) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK_THROWS_AS(T.pullback(0, 1.5), NoPreimageError);

    auto g = make_g_alpha(0.5);
    ConjugacyKernel k(0.5);
    double x = g.pullback(0, 0.5);
    CHECK(x == doctest::Approx(k.value(0.25)).epsilon(1e-12));
    CHECK(g.eval(x) == doctest::Approx(0.5).epsilon(1e-12)); // forward round trip
}

TEST_CASE("g_alpha structure") {
    for (double a : {0.5, 1.0, 2.0}) {
        auto g = make_g_alpha(a);
        CHECK(g.kind() == MapKind::cusp);
        CHECK(g.boundary_tags_consistent());
        // turning point value: g -> 1 at c
        CHECK(g.eval(0.5 - 1e-12) > 1.0 - 1e-9);
        CHECK(g.eval(0.5 - 1e-12) <= 1.0);
        // conjugacy anchor g(h(1/4)) = 1/2
        ConjugacyKernel k(a);
        CHECK(g.eval(k.value(0.25)) == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("g_alpha power law at the origin") {
    // log-log slope near 0 equals 2^{-alpha}. The pure power-law zone ends
    // where the turning-point side of the conjugacy takes over, at
    // h(1/4) = K e^{-4^alpha}; the fit window stays inside it.
    for (double a : {0.5, 1.0, 2.0}) {
        auto g = make_g_alpha(a);
        ConjugacyKernel k(a);
        double hi = std::min(1e-4, 0.1 * k.value(0.25));
        auto xs = log_grid(hi * 1e-4, hi, 64);
        std::vector<double> lx, ly;
        for (double x : xs) {
            lx.push_back(std::log(x));
            ly.push_back(std::log(g.eval(x)));
        }
        double slope = lsq_slope(lx, ly);
        CHECK(slope == doctest::Approx(std::exp2(-a)).epsilon(1e-6));
    }
}

TEST_CASE("f_alpha parabolic point and closed-form derivative") {
    for (double a : {0.5, 1.0, 2.0}) {
        auto f = make_f_alpha(a);
        CHECK(f.boundary_tags_consistent());
        // Df(0+) -> 1 (parabolic fixed point)
        CHECK(f.log_abs_deriv(1e-300) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(std::abs(f.deriv(1e-12) - 1.0) < 1e-5);
        // closed form (1 - x^a ln2)^{-(1+a)/a} over [1e-6, 0.1]
        double worst = 0.0;
        for (double x : log_grid(1e-6, 0.1, 400)) {
            double exact = std::pow(1.0 - std::pow(x, a) * kLn2, -(1.0 + a) / a);
            double got = std::exp(f.log_abs_deriv(x));
            worst = std::max(worst, std::abs(got - exact) / exact);
        }
        CHECK(worst < 1e-8);
        // value closed form f(x) = x (1 - x^a ln 2)^{-1/a} near 0
        for (double x : log_grid(1e-6, 0.01, 50)) {
            double exact = x * std::pow(1.0 - std::pow(x, a) * kLn2, -1.0 / a);
            CHECK(f.eval(x) == doctest::Approx(exact).epsilon(1e-12));
        }
    }
}

TEST_CASE("f_alpha cusp at the turning point") {
    auto f = make_f_alpha(1.0);
    double prev = 0.0;
    for (int k = 2; k <= 10; ++k) {
        double x = 0.5 + std::pow(10.0, -k);
        double d = std::abs(f.deriv(x));
        CHECK(d > prev); // |Df| grows without bound approaching c
        prev = d;
    }
}

TEST_CASE("g_b family") {
    const double b = 1.8, a = 1.0;
    auto g = make_g_b(b, a);
    CHECK(g.boundary_tags_consistent());
    // flat maximum: e^{-1-|x|^{-a}} underflows, so the limit value is exact
    CHECK(g.eval(1e-300) == b - 1.0);
    CHECK(g.eval(-1e-300) == b - 1.0);
    // log-derivative identity to 1e-10 on a grid
    for (double x : log_grid(1e-6, 0.9, 200)) {
        double lhs = g.log_abs_deriv(x) + std::pow(x, -a);
        double rhs = std::log(b * a) - (1.0 + a) * std::log(x) - 1.0;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
        CHECK(g.eval(-x) == doctest::Approx(g.eval(x)).epsilon(1e-14)); // even
    }
    CHECK_THROWS_AS(make_g_b(2.5, 1.0), DomainError);
}

namespace {
// Near the interval ends plain doubles either underflow h or represent it as
// 1 - (few ulp), which destroys the conjugated coordinate; the identities
// there are covered by the log-space kernel tests. Inputs must stay 1e-6
// away from 1 for the inverse recovery to be well-posed at 1e-9.
bool good_input(double v) { return v > 1e-250 && v < 1.0 - 1e-6; }
bool good_value(double v) { return v > 1e-250 && v < 1.0; }
} // namespace

TEST_CASE("conjugacy identities") {
    // g(h(x)) = h(T(x)) and h(f(x)) = T(h(x)), relative 1e-9 away from the ends
    for (double a : {0.5, 1.0, 2.0}) {
        auto g = make_g_alpha(a);
        auto f = make_f_alpha(a);
        ConjugacyKernel k(a);
        Rng rng(11);
        int used = 0;
        for (int i = 0; i < 1000; ++i) {
            double x = rng.uniform(1e-6, 1.0 - 1e-6);
            if (x == 0.5) continue;
            double hx = k.value(x);
            double hTx = k.value(tent(x));
            if (!good_input(hx) || !good_value(hTx)) continue;
            ++used;
            CHECK(g.eval(hx) == doctest::Approx(hTx).epsilon(1e-9));
            double fx = f.eval(x);
            double lhs_f = k.value(fx), rhs_f = tent(hx);
            if (good_value(lhs_f) && good_value(rhs_f))
                CHECK(lhs_f == doctest::Approx(rhs_f).epsilon(1e-9));
        }
        CHECK(used > 300);
    }
}

TEST_CASE("chain rule for g_alpha") {
    for (double a : {0.5, 1.0}) {
        auto g = make_g_alpha(a);
        ConjugacyKernel k(a);
        Rng rng(13);
        for (int i = 0; i < 500; ++i) {
            double x = rng.uniform(1e-6, 1.0 - 1e-6);
            if (x == 0.5) continue;
            double hx = k.value(x);
            if (!good_input(hx)) continue;
            double lhs = g.log_abs_deriv(hx);
            double rhs = k.log_deriv(tent(x)) + kLn2 - k.log_deriv(x);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
        }
    }
}

TEST_CASE("central symmetry of the conjugate families") {
    for (double a : {0.5, 1.5}) {
        auto g = make_g_alpha(a);
        auto f = make_f_alpha(a);
        Rng rng(17);
        for (int i = 0; i < 300; ++i) {
            double x = rng.uniform(1e-9, 0.5 - 1e-9);
            CHECK(g.eval(x) == doctest::Approx(g.eval(1.0 - x)).epsilon(1e-13));
            CHECK(f.eval(x) == doctest::Approx(f.eval(1.0 - x)).epsilon(1e-13));
        }
    }
}

TEST_CASE("branch monotonicity and disjointness for all families") {
    std::vector<PiecewiseMap> maps;
    maps.push_back(tent_map());
    for (double a : {0.25, 0.5, 1.0, 1.5, 2.0}) {
        maps.push_back(make_g_alpha(a));
        maps.push_back(make_f_alpha(a));
        maps.push_back(make_g_b(1.8, a));
    }
    for (const auto& m : maps) {
        for (int bi = 0; bi < m.branch_count(); ++bi) {
            const Branch& b = m.branches()[bi];
            if (bi > 0)
                CHECK(m.branches()[bi - 1].domain.hi <= b.domain.lo);
            double prev = std::nan("");
            const int samples = 200;
            for (int i = 1; i < samples; ++i) {
                double x = b.domain.lo + b.domain.length() * i / samples;
                double v = b.value(x);
                if (!std::isnan(prev)) {
                    if (b.orientation == Orientation::increasing)
                        CHECK(v >= prev);
                    else
                        CHECK(v <= prev);
                }
                prev = v;
            }
        }
    }
}
