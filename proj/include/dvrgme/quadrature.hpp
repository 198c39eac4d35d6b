#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "dvrgme/errors.hpp"

namespace dvrgme::detail {

/// Integral of f over [a, b] split into panels of at most `width`, each
/// integrated by adaptive 31-point Gauss-Kronrod. Panel sums are accumulated
/// in order so the result is reproducible.
template <class F>
double integrate_panels(F&& f, double a, double b, double width, double tolerance = 1e-12,
                        double* error_out = nullptr) {
  using boost::math::quadrature::gauss_kronrod;
  if (!(b > a)) return 0.0;
  const auto panels = static_cast<long>(std::ceil((b - a) / width));
  const double h = (b - a) / static_cast<double>(panels);
  double sum = 0.0;
  double error = 0.0;
  for (long k = 0; k < panels; ++k) {
    const double lo = a + h * static_cast<double>(k);
    const double hi = (k + 1 == panels) ? b : lo + h;
    double panel_error = 0.0;
    sum += gauss_kronrod<double, 31>::integrate(f, lo, hi, 4, tolerance, &panel_error);
    error += std::abs(panel_error);
  }
  if (error_out) *error_out = error;
  return sum;
}

/// Integral over [0, end] with geometrically growing panels near the origin,
/// where correlation functions vary on the 1/omega_c scale, then uniform
/// panels of `width`.
template <class F>
double integrate_from_origin(F&& f, double end, double first, double width,
                             double tolerance = 1e-12, double* error_out = nullptr) {
  double sum = 0.0;
  double error = 0.0;
  double lo = 0.0;
  double panel = std::min(first, width);
  while (lo < end && panel < width) {
    const double hi = std::min(end, lo + panel);
    double e = 0.0;
    sum += integrate_panels(f, lo, hi, panel, tolerance, &e);
    error += e;
    lo = hi;
    panel *= 2.0;
  }
  if (lo < end) {
    double e = 0.0;
    sum += integrate_panels(f, lo, end, width, tolerance, &e);
    error += e;
  }
  if (error_out) *error_out = error;
  return sum;
}

}  // namespace dvrgme::detail
