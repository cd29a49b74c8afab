#pragma once

#include "cusplab/errors.hpp"

namespace cusplab {

/// Smooth conjugacy h between the full tent map and the flat-top / parabolic
/// families. On (0, 1/2] it is the closed form
///
///     h(x) = K * exp(-x^{-alpha}),   K = (1/2) * exp(2^alpha),
///
/// scaled so that h(1/2) = 1/2 exactly, and extended to [1/2, 1) by the
/// central symmetry h(1-x) = 1 - h(x). h is a C^1 increasing homeomorphism of
/// [0,1] with h(0)=0, h(1)=1 and Dh > 0 on the interior.
///
/// exp(-x^{-alpha}) underflows a double already at x ~ (745)^{-1/alpha}, so
/// every quantity is computed and stored as a logarithm; plain-real accessors
/// exponentiate at the boundary of the interface, with the natural-log
/// argument floored at -745 (documented: below the floor the plain value is
/// the smallest subnormal, and the log accessors are authoritative).
class ConjugacyKernel {
public:
    static constexpr double kLogFloor = -745.0;

    explicit ConjugacyKernel(double alpha);

    double alpha() const { return alpha_; }
    /// K = (1/2) e^{2^alpha}; chosen so the midpoint is fixed: h(1/2) = 1/2.
    double scale() const { return scale_; }
    double log_scale() const { return log_scale_; }

    /// h(x) on (0,1). Throws BoundaryError at 0 and 1.
    double value(double x) const;
    /// ln h(x); exact far below the underflow threshold of value().
    double log_value(double x) const;
    /// 1/2 - h(x) for x in (0, 1/2], computed without cancellation.
    double half_minus_value(double x) const;

    /// h^{-1}(y) on (0,1).
    double inverse(double y) const;
    /// h^{-1}(e^{log_y}) for log_y <= -log 2; accepts log_y down to -1e308.
    double inverse_from_log(double log_y) const;

    /// ln Dh(x): log K + log alpha - (1+alpha) log x - x^{-alpha}, reflected
    /// symmetrically onto (1/2, 1).
    double log_deriv(double x) const;
    double deriv(double x) const;
    /// ln D(h^{-1})(y) = -ln Dh(h^{-1}(y)).
    double log_deriv_inverse(double y) const;

    /// x^{-alpha} and x^alpha on (0,1], precision-preserving near x = 1/2.
    double pow_neg(double x) const;
    double pow_pos(double x) const;

    /// s(x) = 2^alpha - x^{-alpha} for x in (0, 1/2]; h(x) = (1/2) e^{s(x)}.
    double exponent(double x) const;

private:
    double alpha_;
    double pow2a_;     // 2^alpha via exp2
    double scale_;     // K
    double log_scale_; // ln K = ln(1/2) + 2^alpha
};

} // namespace cusplab
