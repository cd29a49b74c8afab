#include "cusplab/families.hpp"

#include "cusplab/numerics.hpp"

#include <cmath>
#include <limits>

namespace cusplab {

namespace {
constexpr double kLn2 = 0.6931471805599453094172321214581766;
} // namespace

double tent(double x) {
    if (!(x >= 0.0 && x <= 1.0))
        throw DomainError("tent: argument outside [0,1]");
    return x <= 0.5 ? 2.0 * x : 2.0 - 2.0 * x;
}

PiecewiseMap tent_map() {
    Branch left{OpenInterval(0.0, 0.5), Orientation::increasing,
                [](double x) { return 2.0 * x; },
                [](double) { return kLn2; },
                0.0, 1.0, BoundaryTag::finite, BoundaryTag::finite};
    Branch right{OpenInterval(0.5, 1.0), Orientation::decreasing,
                 [](double x) { return 2.0 - 2.0 * x; },
                 [](double) { return kLn2; },
                 0.0, 1.0, BoundaryTag::finite, BoundaryTag::finite};
    return PiecewiseMap("tent", OpenInterval(0.0, 1.0), {left, right}, MapKind::plain);
}

std::shared_ptr<const ConjugacyKernel> make_kernel(double alpha) {
    return std::make_shared<const ConjugacyKernel>(alpha);
}

namespace {

// Values collapse onto the closed endpoints of (0,1) one ulp before the maps
// do in exact arithmetic (the flat top's image is within ulp(1) of 1 on a
// whole sub-resolution plateau). Keep orbits inside the open interval.
double clamp_open_unit(double v) {
    if (v >= 1.0) return std::nextafter(1.0, 0.0);
    if (v <= 0.0) return std::numeric_limits<double>::min();
    return v;
}

// Increasing half of g: x in (0, 1/2), g(x) = h(2 h^{-1}(x)).
double g_value_left(const ConjugacyKernel& k, double x) {
    double u = k.inverse(x); // u in (0, 1/2)
    if (u >= 0.5) u = std::nextafter(0.5, 0.0);
    double v = 2.0 * u;
    if (v >= 1.0) v = std::nextafter(1.0, 0.0);
    return clamp_open_unit(k.value(v));
}

double g_logderiv_left(const ConjugacyKernel& k, double x) {
    double u = k.inverse(x);
    if (u >= 0.5) u = std::nextafter(0.5, 0.0);
    double v = 2.0 * u;
    if (v >= 1.0) v = std::nextafter(1.0, 0.0);
    return k.log_deriv(v) + kLn2 - k.log_deriv(u);
}

// Increasing half of f: x in (0, 1/2), f(x) = h^{-1}(2 h(x)).
double f_value_left(const ConjugacyKernel& k, double x) {
    const double a = k.alpha();
    double xma = k.pow_neg(x);
    if (xma >= std::exp2(a) + 2.0 * kLn2) {
        // closed-form region: 2h(x) <= 1/2, f = x (1 - x^a ln2)^{-1/a}
        double xa = k.pow_pos(x);
        return x * std::exp(-std::log1p(-xa * kLn2) / a);
    }
    double s = k.exponent(x); // 2h(x) = e^s in (1/4, 1)
    double w = -std::expm1(s); // 1 - 2h(x), full precision
    if (w <= 0.0) return std::nextafter(1.0, 0.0);
    return clamp_open_unit(1.0 - k.inverse(w));
}

double f_logderiv_left(const ConjugacyKernel& k, double x) {
    const double a = k.alpha();
    double xma = k.pow_neg(x);
    if (xma >= std::max(1e4, std::exp2(a + 1.0))) {
        // ln Df = -((1+a)/a) ln(1 - x^a ln2); the generic chain rule loses
        // ~x^{-a} ulps to cancellation here, the closed form loses none.
        double xa = k.pow_pos(x);
        return -((1.0 + a) / a) * std::log1p(-xa * kLn2);
    }
    double fx = f_value_left(k, x);
    double ldh_f = fx <= 0.5 ? k.log_deriv(fx) : k.log_deriv(1.0 - fx);
    return kLn2 + k.log_deriv(x) - ldh_f;
}

} // namespace

PiecewiseMap make_g_alpha(double alpha) {
    auto k = make_kernel(alpha);
    Branch left{OpenInterval(0.0, 0.5), Orientation::increasing,
                [k](double x) { return g_value_left(*k, x); },
                [k](double x) { return g_logderiv_left(*k, x); },
                0.0, 1.0, BoundaryTag::plus_infinity, BoundaryTag::zero};
    Branch right{OpenInterval(0.5, 1.0), Orientation::decreasing,
                 [k](double x) { return g_value_left(*k, 1.0 - x); },
                 [k](double x) { return g_logderiv_left(*k, 1.0 - x); },
                 0.0, 1.0, BoundaryTag::zero, BoundaryTag::minus_infinity};
    return PiecewiseMap("g_alpha", OpenInterval(0.0, 1.0), {left, right}, MapKind::cusp);
}

PiecewiseMap make_f_alpha(double alpha) {
    auto k = make_kernel(alpha);
    Branch left{OpenInterval(0.0, 0.5), Orientation::increasing,
                [k](double x) { return f_value_left(*k, x); },
                [k](double x) { return f_logderiv_left(*k, x); },
                0.0, 1.0, BoundaryTag::finite, BoundaryTag::plus_infinity};
    Branch right{OpenInterval(0.5, 1.0), Orientation::decreasing,
                 [k](double x) { return f_value_left(*k, 1.0 - x); },
                 [k](double x) { return f_logderiv_left(*k, 1.0 - x); },
                 0.0, 1.0, BoundaryTag::minus_infinity, BoundaryTag::finite};
    return PiecewiseMap("f_alpha", OpenInterval(0.0, 1.0), {left, right}, MapKind::plain);
}

PiecewiseMap make_g_b(double b, double alpha) {
    if (!(b > 0.0 && b <= 2.0))
        throw DomainError("make_g_b: b must lie in (0, 2]");
    if (!(alpha > 0.0))
        throw DomainError("make_g_b: alpha must be positive");
    auto value = [b, alpha](double x) {
        double ax = std::abs(x);
        return (b - 1.0) - b * std::exp(-1.0 - pow2_path(ax, -alpha));
    };
    auto logd = [b, alpha](double x) {
        double ax = std::abs(x);
        return std::log(b * alpha) - (1.0 + alpha) * std::log(ax) - 1.0 -
               pow2_path(ax, -alpha);
    };
    const double at_edge = (b - 1.0) - b * std::exp(-2.0); // g_b(+-1)
    Branch left{OpenInterval(-1.0, 0.0), Orientation::increasing, value, logd,
                at_edge, b - 1.0, BoundaryTag::finite, BoundaryTag::zero};
    Branch right{OpenInterval(0.0, 1.0), Orientation::decreasing, value, logd,
                 at_edge, b - 1.0, BoundaryTag::zero, BoundaryTag::finite};
    return PiecewiseMap("g_b", OpenInterval(-1.0, 1.0), {left, right}, MapKind::plain);
}

Branch restrict_branch(const Branch& b, OpenInterval sub) {
    if (!b.domain.contains(sub))
        throw DomainError("restrict_branch: subinterval escapes the branch domain");
    Branch r = b;
    r.domain = sub;
    double va = b.value(sub.lo + 1e-15 * (sub.hi - sub.lo));
    double vb = b.value(sub.hi - 1e-15 * (sub.hi - sub.lo));
    r.image_lo = std::min(va, vb);
    r.image_hi = std::max(va, vb);
    r.tag_lo = r.tag_hi = BoundaryTag::finite;
    return r;
}

} // namespace cusplab
