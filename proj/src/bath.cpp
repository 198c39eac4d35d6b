#include "dvrgme/bath.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "dvrgme/errors.hpp"
#include "dvrgme/quadrature.hpp"

namespace dvrgme {

namespace {

using std::numbers::pi;

// ln|Gamma(z)| for Re z > 0: recurrence up to |z| >= 15, then Stirling.
double log_abs_gamma(std::complex<double> z) {
  double shift = 0.0;
  while (std::abs(z) < 15.0) {
    shift += std::log(std::abs(z));
    z += 1.0;
  }
  const std::complex<double> inv = 1.0 / z;
  const std::complex<double> inv2 = inv * inv;
  const std::complex<double> series =
      inv * (1.0 / 12.0 +
             inv2 * (-1.0 / 360.0 + inv2 * (1.0 / 1260.0 + inv2 * (-1.0 / 1680.0 + inv2 / 1188.0))));
  const std::complex<double> stirling =
      (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * pi) + series;
  return stirling.real() - shift;
}

// 2 sin^2(w t / 2) / w^2
double one_minus_cos_over_w2(double w, double t) {
  const double x = w * t;
  if (x < 1e-3) return 0.5 * t * t * (1.0 - x * x / 12.0 + x * x * x * x / 360.0);
  const double s = std::sin(0.5 * x);
  return 2.0 * s * s / (w * w);
}

// w coth(beta w / 2)
double thermal_weight(double w, double beta) {
  const double y = 0.5 * beta * w;
  if (y < 1e-4) return (2.0 / beta) * (1.0 + y * y / 3.0);
  return w / std::tanh(y);
}

// sin(w t) / w
double sin_over_w(double w, double t) {
  const double x = w * t;
  if (x < 1e-3) return t * (1.0 - x * x / 6.0 + x * x * x * x / 120.0);
  return std::sin(x) / w;
}

}  // namespace

double BathModel::unit_coupling() const { return friction / (2.0 * pi); }

void BathModel::validate() const {
  if (!(friction >= 0.0)) throw std::invalid_argument("friction must be >= 0");
  if (!(cutoff > 0.0)) throw std::invalid_argument("cutoff must be > 0");
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be > 0");
}

double spectral_density(double omega, const BathModel& bath) {
  return bath.friction * omega * std::exp(-omega / bath.cutoff);
}

std::complex<double> bath_correlation(double t, const BathModel& bath) {
  bath.validate();
  if (t < 0.0) return std::conj(bath_correlation(-t, bath));
  if (t == 0.0 || bath.friction == 0.0) return {0.0, 0.0};

  const double beta = bath.beta();
  const double wc = bath.cutoff;
  const double prefactor = bath.friction / pi;
  const double upper = wc * std::log(1e16) + 50.0 / t;
  const double width = std::min({pi / t, wc, 4.0 / beta});
  const double first = 1e-3 * width;

  auto re = [&](double w) {
    return std::exp(-w / wc) * one_minus_cos_over_w2(w, t) * thermal_weight(w, beta);
  };
  auto im = [&](double w) { return std::exp(-w / wc) * sin_over_w(w, t); };

  double err_re = 0.0;
  double err_im = 0.0;
  const double q_re = detail::integrate_from_origin(re, upper, first, width, 1e-12, &err_re);
  const double q_im = detail::integrate_from_origin(im, upper, first, width, 1e-12, &err_im);
  const double achieved = std::max(err_re / std::max(std::abs(q_re), 1e-300),
                                   err_im / std::max(std::abs(q_im), 1e-300));
  if (achieved > 1e-8) {
    throw NumericalError("bath correlation quadrature did not converge", achieved);
  }
  return {prefactor * q_re, prefactor * q_im};
}

std::complex<double> bath_correlation_closed_form(double t, const BathModel& bath) {
  if (t < 0.0) return std::conj(bath_correlation_closed_form(-t, bath));
  if (t == 0.0 || bath.friction == 0.0) return {0.0, 0.0};
  const double beta = bath.beta();
  const double wc = bath.cutoff;
  const double kappa = 1.0 / (beta * wc);
  const double prefactor = bath.friction / pi;
  // coth = 1 + 2 sum_n exp(-n beta w) turns the real part into a product
  // over Matsubara-like terms, summed by the Gamma function.
  const double re = 0.5 * std::log1p(wc * wc * t * t) + 2.0 * log_abs_gamma({1.0 + kappa, 0.0}) -
                    2.0 * log_abs_gamma({1.0 + kappa, t / beta});
  const double im = std::atan(wc * t);
  return {prefactor * re, prefactor * im};
}

std::complex<double> high_temp_Q(double t, const BathModel& bath) {
  const double a = bath.unit_coupling();
  const double beta = bath.beta();
  const double sign = t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0);
  const double re = 2.0 * a * (pi * std::abs(t) / beta + std::log(beta * bath.cutoff / (2.0 * pi)));
  return {re, pi * a * sign};
}

double effective_coupling(double charge, const BathModel& bath, double ref_length) {
  if (!(ref_length > 0.0)) throw std::invalid_argument("reference length must be positive");
  const double alpha = bath.friction * ref_length * ref_length / (2.0 * pi);
  const double ratio = charge / ref_length;
  return ratio * ratio * alpha;
}

double CorrelationFunction::decay_lag(double weight, double log_threshold, double limit) const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (weight <= 0.0 || bath_.friction == 0.0) return inf;
  auto reached = [&](double t) { return weight * value(t).real() >= log_threshold; };
  double hi = 1.0;
  while (!reached(hi)) {
    hi *= 2.0;
    if (hi > limit) return inf;
  }
  double lo = 0.0;
  while (hi - lo > 1e-3 * hi) {
    const double mid = 0.5 * (lo + hi);
    (reached(mid) ? hi : lo) = mid;
  }
  return hi;
}

QTable::QTable(const BathModel& bath, double step, double horizon)
    : CorrelationFunction(bath), step_(step) {
  bath.validate();
  if (!(step > 0.0) || !(horizon > 0.0)) throw std::invalid_argument("QTable needs positive step and horizon");
  auto count = static_cast<std::size_t>(std::ceil(horizon / step)) + 1;
  count = std::max<std::size_t>(4, std::min(count, kMaxSamples));
  real_.resize(count);
  imag_.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    const auto q = bath_correlation_closed_form(step * static_cast<double>(k), bath);
    real_[k] = q.real();
    imag_[k] = q.imag();
  }
}

QTable QTable::for_weight(const BathModel& bath, double min_weight, double step) {
  const double log_threshold = std::log(1e10);
  double horizon = 100.0;
  if (bath.friction > 0.0 && min_weight > 0.0) {
    // Re Q is nondecreasing; bracket on the closed form before tabulating.
    double hi = 1.0;
    const double cap = step * static_cast<double>(kMaxSamples - 1);
    while (min_weight * bath_correlation_closed_form(hi, bath).real() < log_threshold && hi < cap) hi *= 2.0;
    horizon = std::min(hi, cap);
  }
  return QTable(bath, step, horizon);
}

std::complex<double> QTable::value(double t) const {
  if (t < 0.0) return std::conj(value(-t));
  const double x = t / step_;
  const auto last = real_.size() - 1;
  if (x >= static_cast<double>(last)) {
    if (x == static_cast<double>(last)) return {real_[last], imag_[last]};
    return bath_correlation_closed_form(t, bath());
  }
  // Four-point Lagrange stencil, shifted inward at the ends.
  auto base = static_cast<std::ptrdiff_t>(std::floor(x)) - 1;
  base = std::clamp<std::ptrdiff_t>(base, 0, static_cast<std::ptrdiff_t>(last) - 3);
  const double s = x - static_cast<double>(base);
  const double w0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
  const double w1 = s * (s - 2.0) * (s - 3.0) / 2.0;
  const double w2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
  const double w3 = s * (s - 1.0) * (s - 2.0) / 6.0;
  const auto b = static_cast<std::size_t>(base);
  return {w0 * real_[b] + w1 * real_[b + 1] + w2 * real_[b + 2] + w3 * real_[b + 3],
          w0 * imag_[b] + w1 * imag_[b + 1] + w2 * imag_[b + 2] + w3 * imag_[b + 3]};
}

void QTable::write_csv(std::ostream& out) const {
  out << "t,Qre,Qim\n";
  out.precision(12);
  for (std::size_t k = 0; k < real_.size(); ++k) {
    out << step_ * static_cast<double>(k) << ',' << real_[k] << ',' << imag_[k] << '\n';
  }
}

bool HighTemperatureCorrelation::valid() const {
  const BathModel& b = bath();
  return b.temperature >= 1.0 && b.friction <= 0.1 && b.cutoff >= 5.0 * std::max(1.0, b.temperature);
}

}  // namespace dvrgme
