#pragma once

#include <Eigen/Dense>
#include <memory>

#include "dvrgme/bath.hpp"
#include "dvrgme/dvr.hpp"

namespace dvrgme {

/// External field s(t) = s sin(Omega t + phase) coupling as -s(t) q.
struct DriveSpec {
  enum class Protocol { none, sinusoidal };

  Protocol protocol = Protocol::none;
  double amplitude = 0.0;  // internal units (s0 = hbar omega_0 / x0 = 1)
  double frequency = 0.0;
  double phase = 0.0;

  static DriveSpec sinusoidal(double amplitude, double frequency, double phase = 0.0);

  bool driven() const { return protocol == Protocol::sinusoidal && amplitude != 0.0; }
  double period() const;
  double field(double t) const;
  /// Integral of s(t'') over [from, to].
  double integral(double from, double to) const;
  void validate() const;
};

/// Lowest-order GME kernels for a DVR basis, a bath correlation function and
/// a drive. Holds the pairwise (lambda_mu - lambda_nu)^2 and F_mu - F_nu
/// tables; the correlation function is shared and immutable.
class KernelSet {
 public:
  KernelSet(DvrBasis basis, std::shared_ptr<const CorrelationFunction> correlation, DriveSpec drive);

  int size() const { return basis_.size(); }
  const DvrBasis& basis() const { return basis_; }
  const CorrelationFunction& correlation() const { return *correlation_; }
  std::shared_ptr<const CorrelationFunction> correlation_ptr() const { return correlation_; }
  const DriveSpec& drive() const { return drive_; }
  const BathModel& bath() const { return correlation_->bath(); }

  /// (lambda_mu - lambda_nu)^2
  double charge_squared(int mu, int nu) const { return charge2_(mu, nu); }
  /// F_mu - F_nu
  double bias(int mu, int nu) const { return bias_(mu, nu); }

  /// phi_{nu mu}(t, t') = int_{t'}^{t} [eps_mu - eps_nu], eps_nu = F_nu - lambda_nu s(t).
  double driving_phase(int nu, int mu, double t, double t_prime) const;

  /// H_{nu mu}(t, t'); the diagonal follows from vanishing column sums.
  double kernel(int nu, int mu, double t, double t_prime) const;
  Eigen::MatrixXd kernel_matrix(double t, double t_prime) const;

  /// Lag beyond which every off-diagonal envelope exp(-Re Q_{nu mu}) is below
  /// `threshold` (relative to its value at zero lag). +inf without damping.
  double memory_lag(double threshold) const;
  /// Largest frequency scale among |F_mu - F_nu| and the drive frequency.
  double fastest_frequency() const;

 private:
  DvrBasis basis_;
  std::shared_ptr<const CorrelationFunction> correlation_;
  DriveSpec drive_;
  Eigen::MatrixXd charge2_;
  Eigen::MatrixXd bias_;
};

/// I_nu(t, t0): superposition over the stored initial coherences (a, b) of
/// (delta_{nu a} - delta_{nu b}) Re rho_ab Delta_ab exp(-Re Q_ab) sin(phi_ab - Im Q_ab).
double inhomogeneity(int nu, double t, double t0, const KernelSet& kernels, const InitialState& init);
Eigen::VectorXd inhomogeneity_vector(double t, double t0, const KernelSet& kernels,
                                     const InitialState& init);

}  // namespace dvrgme
