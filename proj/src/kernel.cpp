#include "cusplab/kernel.hpp"

#include "cusplab/numerics.hpp"

#include <cmath>

namespace cusplab {

namespace {
constexpr double kLn2 = 0.6931471805599453094172321214581766;

void require_interior(double x, const char* who) {
    if (!(x > 0.0 && x < 1.0))
        throw BoundaryError(std::string(who) + ": argument must lie in (0,1)");
}
} // namespace

ConjugacyKernel::ConjugacyKernel(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0))
        throw DomainError("ConjugacyKernel: alpha must be positive");
    pow2a_ = std::exp2(alpha_);
    log_scale_ = std::log(0.5) + pow2a_;
    scale_ = 0.5 * std::exp(pow2a_);
}

double ConjugacyKernel::pow_neg(double x) const {
    if (x >= 0.25) {
        // x^{-a} = 2^a * exp(-a*ln(2x)); ln(2x) via log1p keeps full precision
        // as x -> 1/2 (2x - 1 is exact there).
        return pow2a_ * std::exp(-alpha_ * std::log1p(2.0 * x - 1.0));
    }
    return pow2_path(x, -alpha_);
}

double ConjugacyKernel::pow_pos(double x) const {
    if (x >= 0.25)
        return std::exp(alpha_ * (std::log1p(2.0 * x - 1.0) - kLn2));
    return pow2_path(x, alpha_);
}

double ConjugacyKernel::exponent(double x) const {
    if (x >= 0.25) {
        // s = 2^a - x^{-a} = -2^a * expm1(-a*ln(2x)); exact zero at x = 1/2.
        return -pow2a_ * std::expm1(-alpha_ * std::log1p(2.0 * x - 1.0));
    }
    return pow2a_ - pow2_path(x, -alpha_);
}

double ConjugacyKernel::log_value(double x) const {
    require_interior(x, "kernel log_value");
    if (x <= 0.5)
        return std::log(0.5) + exponent(x);
    // ln(1 - h(1-x)); h(1-x) <= 1/2 so log1p is safe.
    return std::log1p(-value(1.0 - x));
}

double ConjugacyKernel::value(double x) const {
    require_interior(x, "kernel value");
    if (x > 0.5)
        return 1.0 - value(1.0 - x);
    double lv = std::log(0.5) + exponent(x);
    if (lv < kLogFloor) lv = kLogFloor;
    return std::exp(lv);
}

double ConjugacyKernel::half_minus_value(double x) const {
    require_interior(x, "kernel half_minus_value");
    if (x > 0.5)
        throw DomainError("half_minus_value: defined on (0, 1/2]");
    return -0.5 * std::expm1(exponent(x));
}

double ConjugacyKernel::inverse(double y) const {
    require_interior(y, "kernel inverse");
    if (y == 0.5) return 0.5;
    if (y > 0.5)
        return 1.0 - inverse(1.0 - y);
    if (y >= 0.25) {
        // t = log K - ln y = 2^a - ln(2y), resolved to full precision.
        double t = pow2a_ - std::log1p(2.0 * y - 1.0);
        return pow2_path(t, -1.0 / alpha_);
    }
    return inverse_from_log(std::log(y));
}

double ConjugacyKernel::inverse_from_log(double log_y) const {
    if (!(log_y <= -kLn2 + 1e-15))
        throw DomainError("inverse_from_log: expects ln y <= -ln 2");
    double t = log_scale_ - log_y;
    return pow2_path(t, -1.0 / alpha_);
}

double ConjugacyKernel::log_deriv(double x) const {
    require_interior(x, "kernel log_deriv");
    double xr = x > 0.5 ? 1.0 - x : x;
    // ln Dh = ln K + ln a - (1+a) ln x - x^{-a}
    //       = ln(1/2) + ln a - (1+a) ln x + s(x).
    return std::log(0.5) + std::log(alpha_) - (1.0 + alpha_) * std::log(xr) + exponent(xr);
}

double ConjugacyKernel::deriv(double x) const {
    double ld = log_deriv(x);
    if (ld < kLogFloor) ld = kLogFloor;
    return std::exp(ld);
}

double ConjugacyKernel::log_deriv_inverse(double y) const {
    return -log_deriv(inverse(y));
}

} // namespace cusplab
