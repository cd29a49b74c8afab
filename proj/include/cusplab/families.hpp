#pragma once

#include "cusplab/kernel.hpp"
#include "cusplab/piecewise_map.hpp"

#include <memory>

namespace cusplab {

/// Full tent map T(x) = 2x on (0,1/2), 2-2x on (1/2,1), as a two-branch map
/// on the open ambient interval (0,1).
PiecewiseMap tent_map();

/// Plain function form of the tent map on the closed interval [0,1].
double tent(double x);

/// Flat-top family g_alpha = h o T o h^{-1}: unimodal on (0,1) with a flat
/// critical point at c = 1/2 (derivative -> 0 faster than any power) and
/// root-type poles at the endpoints (|Dg| -> infinity; near 0,
/// g(x) = K^{1-2^{-alpha}} x^{2^{-alpha}}).
PiecewiseMap make_g_alpha(double alpha);

/// Parabolic family f_alpha = h^{-1} o T o h: fixed point at 0 with
/// Df(0+) = 1 and a cusp (|Df| -> infinity) at c = 1/2. Near 0 the scaled
/// kernel gives exactly f(x) = x (1 - x^alpha ln 2)^{-1/alpha}.
PiecewiseMap make_f_alpha(double alpha);

/// Unimodal exponential-flat family on (-1,1):
/// g_b(x) = -1 + b (1 - e^{-1-|x|^{-alpha}}), flat maximum b-1 at x = 0.
PiecewiseMap make_g_b(double b, double alpha);

/// The kernel a conjugate family was built from (shared by g/f at equal
/// alpha), for density weights and exact sampling.
std::shared_ptr<const ConjugacyKernel> make_kernel(double alpha);

} // namespace cusplab
