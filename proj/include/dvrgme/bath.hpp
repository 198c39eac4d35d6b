#pragma once

#include <complex>
#include <iosfwd>
#include <vector>

namespace dvrgme {

/// Ohmic bath J(omega) = M gamma omega exp(-omega/omega_c) at temperature T
/// (units of hbar omega_0 / k_B).
struct BathModel {
  double friction = 0.1;
  double cutoff = 10.0;
  double temperature = 0.1;

  double beta() const { return 1.0 / temperature; }
  /// Coupling per unit squared length, gamma M / (2 pi hbar).
  double unit_coupling() const;
  void validate() const;
};

double spectral_density(double omega, const BathModel& bath);

/// Q(t) per unit squared length by direct frequency quadrature
/// (relative accuracy ~1e-8). Q(-t) = conj(Q(t)).
std::complex<double> bath_correlation(double t, const BathModel& bath);

/// Same function from the Gamma-function product form of the Ohmic
/// exponential-cutoff integral; used to tabulate Q.
std::complex<double> bath_correlation_closed_form(double t, const BathModel& bath);

/// High-temperature form 2a[pi|t|/beta + ln(beta omega_c / 2pi)] + i pi a sgn t
/// with a = gamma / 2pi.
std::complex<double> high_temp_Q(double t, const BathModel& bath);

/// alpha_j = (xi / ref)^2 alpha, alpha = M gamma ref^2 / (2 pi hbar).
double effective_coupling(double charge, const BathModel& bath, double ref_length);

/// Interface shared by the tabulated exact Q and its high-temperature form.
class CorrelationFunction {
 public:
  explicit CorrelationFunction(const BathModel& bath) : bath_(bath) {}
  virtual ~CorrelationFunction() = default;

  virtual std::complex<double> value(double t) const = 0;
  const BathModel& bath() const { return bath_; }

  /// Smallest lag with weight * Re Q(t) >= log_threshold, or +inf if it is
  /// not reached before `limit`. Relies on Re Q being nondecreasing.
  double decay_lag(double weight, double log_threshold, double limit = 1e7) const;

 private:
  BathModel bath_;
};

/// Q(t) sampled on a uniform grid with four-point cubic interpolation; lags
/// beyond the horizon are evaluated from the closed form directly.
class QTable final : public CorrelationFunction {
 public:
  static constexpr double kDefaultStep = 0.005;
  static constexpr std::size_t kMaxSamples = std::size_t{1} << 20;

  QTable(const BathModel& bath, double step, double horizon);

  /// Horizon chosen so exp(-min_weight * Re Q(t_max)) < 1e-10.
  static QTable for_weight(const BathModel& bath, double min_weight, double step = kDefaultStep);

  std::complex<double> value(double t) const override;

  double step() const { return step_; }
  double horizon() const { return step_ * static_cast<double>(real_.size() - 1); }
  std::size_t samples() const { return real_.size(); }
  double real_sample(std::size_t k) const { return real_[k]; }
  double imag_sample(std::size_t k) const { return imag_[k]; }

  /// Columns t, Qre, Qim.
  void write_csv(std::ostream& out) const;

 private:
  double step_;
  std::vector<double> real_;
  std::vector<double> imag_;
};

class HighTemperatureCorrelation final : public CorrelationFunction {
 public:
  explicit HighTemperatureCorrelation(const BathModel& bath) : CorrelationFunction(bath) {}

  std::complex<double> value(double t) const override { return high_temp_Q(t, bath()); }

  /// k_B T >~ hbar omega_0, omega_c >> k_B T / hbar, omega_0 and gamma <= 0.1.
  bool valid() const;
};

}  // namespace dvrgme
