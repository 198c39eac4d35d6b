#include "dvrgme/kernels.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace dvrgme {

DriveSpec DriveSpec::sinusoidal(double amplitude, double frequency, double phase) {
  DriveSpec d;
  d.protocol = Protocol::sinusoidal;
  d.amplitude = amplitude;
  d.frequency = frequency;
  d.phase = phase;
  d.validate();
  return d;
}

double DriveSpec::period() const {
  return protocol == Protocol::sinusoidal ? 2.0 * std::numbers::pi / frequency : 0.0;
}

double DriveSpec::field(double t) const {
  if (protocol != Protocol::sinusoidal) return 0.0;
  return amplitude * std::sin(frequency * t + phase);
}

double DriveSpec::integral(double from, double to) const {
  if (!driven()) return 0.0;
  return amplitude / frequency * (std::cos(frequency * from + phase) - std::cos(frequency * to + phase));
}

void DriveSpec::validate() const {
  if (!(amplitude >= 0.0)) throw std::invalid_argument("drive amplitude must be >= 0");
  if (protocol == Protocol::sinusoidal && !(frequency > 0.0)) {
    throw std::invalid_argument("sinusoidal drive needs a positive frequency");
  }
}

KernelSet::KernelSet(DvrBasis basis, std::shared_ptr<const CorrelationFunction> correlation, DriveSpec drive)
    : basis_(std::move(basis)), correlation_(std::move(correlation)), drive_(drive) {
  if (!correlation_) throw std::invalid_argument("kernel set needs a correlation function");
  drive_.validate();
  const int n = basis_.size();
  if (basis_.transitions.rows() != n || basis_.onsite.size() != n) {
    throw std::invalid_argument("inconsistent DVR basis dimensions");
  }
  charge2_.resize(n, n);
  bias_.resize(n, n);
  for (int mu = 0; mu < n; ++mu) {
    for (int nu = 0; nu < n; ++nu) {
      const double d = basis_.positions[mu] - basis_.positions[nu];
      charge2_(mu, nu) = d * d;
      bias_(mu, nu) = basis_.onsite[mu] - basis_.onsite[nu];
    }
  }
}

double KernelSet::driving_phase(int nu, int mu, double t, double t_prime) const {
  const double static_part = bias_(mu, nu) * (t - t_prime);
  if (!drive_.driven()) return static_part;
  return static_part - (basis_.positions[mu] - basis_.positions[nu]) * drive_.integral(t_prime, t);
}

double KernelSet::kernel(int nu, int mu, double t, double t_prime) const {
  if (nu == mu) {
    double sum = 0.0;
    for (int k = 0; k < size(); ++k) {
      if (k != mu) sum += kernel(k, mu, t, t_prime);
    }
    return -sum;
  }
  const double delta = basis_.transitions(nu, mu);
  if (delta == 0.0) return 0.0;
  const std::complex<double> q = charge2_(nu, mu) * correlation_->value(t - t_prime);
  return 0.5 * delta * delta * std::exp(-q.real()) * std::cos(driving_phase(nu, mu, t, t_prime) - q.imag());
}

Eigen::MatrixXd KernelSet::kernel_matrix(double t, double t_prime) const {
  const int n = size();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int mu = 0; mu < n; ++mu) {
    for (int nu = 0; nu < n; ++nu) {
      if (nu != mu) h(nu, mu) = kernel(nu, mu, t, t_prime);
    }
    h(mu, mu) = -(h.col(mu).sum());
  }
  return h;
}

double KernelSet::memory_lag(double threshold) const {
  const double log_threshold = -std::log(threshold);
  double lag = 0.0;
  for (int mu = 0; mu < size(); ++mu) {
    for (int nu = mu + 1; nu < size(); ++nu) {
      if (basis_.transitions(nu, mu) == 0.0) continue;
      lag = std::max(lag, correlation_->decay_lag(charge2_(nu, mu), log_threshold));
    }
  }
  return lag;
}

double KernelSet::fastest_frequency() const {
  double w = bias_.cwiseAbs().maxCoeff();
  if (drive_.protocol == DriveSpec::Protocol::sinusoidal) w = std::max(w, drive_.frequency);
  return w;
}

double inhomogeneity(int nu, double t, double t0, const KernelSet& kernels, const InitialState& init) {
  double sum = 0.0;
  for (const Coherence& c : init.coherences) {
    if (nu != c.first && nu != c.second) continue;
    const double delta = kernels.basis().transitions(c.first, c.second);
    if (delta == 0.0) continue;
    const std::complex<double> q = kernels.charge_squared(c.first, c.second) * kernels.correlation().value(t - t0);
    const double phase = kernels.driving_phase(c.first, c.second, t, t0) - q.imag();
    const double term = c.value * delta * std::exp(-q.real()) * std::sin(phase);
    sum += (nu == c.first) ? term : -term;
  }
  return sum;
}

Eigen::VectorXd inhomogeneity_vector(double t, double t0, const KernelSet& kernels, const InitialState& init) {
  Eigen::VectorXd out(kernels.size());
  for (int nu = 0; nu < kernels.size(); ++nu) out[nu] = inhomogeneity(nu, t, t0, kernels, init);
  return out;
}

}  // namespace dvrgme
