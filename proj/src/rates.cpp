#include "dvrgme/rates.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "dvrgme/errors.hpp"
#include "dvrgme/quadrature.hpp"

namespace dvrgme {

namespace {

using std::numbers::pi;
using cplx = std::complex<double>;

const double kTailLog = std::log(1e10);

double pair_lag(const KernelSet& ks, int nu, int mu, double tau_max) {
  if (tau_max > 0.0) return tau_max;
  const double lag = ks.correlation().decay_lag(ks.charge_squared(nu, mu), kTailLog);
  if (!std::isfinite(lag)) {
    throw std::invalid_argument(
        "kernel envelope does not decay (friction = 0?); Markovian rates need friction > 0");
  }
  return lag;
}

double panel_width(double frequency) { return std::min(1.0, pi / (4.0 * std::max(frequency, 1e-12))); }

void finish(RateMatrix& r) {
  const int n = r.size();
  const double scale = r.values.cwiseAbs().maxCoeff();
  for (int mu = 0; mu < n; ++mu) {
    double sum = 0.0;
    for (int nu = 0; nu < n; ++nu) {
      if (nu == mu) continue;
      sum += r.values(nu, mu);
      if (r.values(nu, mu) < -1e-14 * scale) r.negative_rates = true;
    }
    r.values(mu, mu) = -sum;
  }
}

template <class Integrand>
RateMatrix pairwise(const KernelSet& ks, double tau_max, Integrand&& integrand_for) {
  const int n = ks.size();
  RateMatrix r;
  r.values = Eigen::MatrixXd::Zero(n, n);
  r.drive = ks.drive();
  const double first = 0.01 / ks.bath().cutoff;
  for (int mu = 0; mu < n; ++mu) {
    for (int nu = 0; nu < n; ++nu) {
      if (nu == mu) continue;
      const double delta = ks.basis().transitions(nu, mu);
      if (delta == 0.0) continue;
      const double end = pair_lag(ks, nu, mu, tau_max);
      auto [f, frequency] = integrand_for(nu, mu);
      const double integral = detail::integrate_from_origin(f, end, first, panel_width(frequency));
      r.values(nu, mu) = 0.5 * delta * delta * integral;
    }
  }
  finish(r);
  return r;
}

}  // namespace

double RateMatrix::max_column_sum() const { return values.colwise().sum().cwiseAbs().maxCoeff(); }

void RateMatrix::write_csv(std::ostream& out) const {
  out << "# averaged = " << (averaged ? 1 : 0) << '\n';
  out << "# order = " << order << '\n';
  out << "# drive_amplitude = " << drive.amplitude << '\n';
  out << "# drive_frequency = " << drive.frequency << '\n';
  const auto precision = out.precision(12);
  for (int nu = 0; nu < size(); ++nu) {
    for (int mu = 0; mu < size(); ++mu) out << (mu ? "," : "") << values(nu, mu);
    out << '\n';
  }
  out.precision(precision);
}

RateMatrix instantaneous_rates(const KernelSet& ks, double t, double tau_max) {
  const DriveSpec& drive = ks.drive();
  RateMatrix r = pairwise(ks, tau_max, [&](int nu, int mu) {
    const double zeta2 = ks.charge_squared(nu, mu);
    const double zeta = ks.basis().positions[mu] - ks.basis().positions[nu];
    auto f = [&ks, zeta2, nu, mu, t](double tau) {
      const cplx q = zeta2 * ks.correlation().value(tau);
      return std::exp(-q.real()) * std::cos(ks.driving_phase(nu, mu, t, t - tau) - q.imag());
    };
    double frequency = std::abs(ks.bias(mu, nu));
    if (drive.driven()) frequency += std::abs(zeta) * drive.amplitude + drive.frequency;
    return std::make_pair(f, frequency);
  });
  r.averaged = false;
  return r;
}

RateMatrix averaged_rates(const KernelSet& ks) {
  const DriveSpec& drive = ks.drive();
  RateMatrix r = pairwise(ks, 0.0, [&](int nu, int mu) {
    const double zeta2 = ks.charge_squared(nu, mu);
    const double zeta = ks.basis().positions[mu] - ks.basis().positions[nu];
    const double bias = ks.bias(mu, nu);
    const double bessel_scale = drive.driven() ? zeta * 2.0 * drive.amplitude / drive.frequency : 0.0;
    const double half_frequency = drive.driven() ? 0.5 * drive.frequency : 0.0;
    auto f = [&ks, zeta2, bias, bessel_scale, half_frequency](double tau) {
      const cplx q = zeta2 * ks.correlation().value(tau);
      const double bessel =
          bessel_scale == 0.0 ? 1.0 : std::cyl_bessel_j(0.0, std::abs(bessel_scale * std::sin(half_frequency * tau)));
      return std::exp(-q.real()) * bessel * std::cos(bias * tau - q.imag());
    };
    double frequency = std::abs(bias);
    if (drive.driven()) frequency += std::abs(bessel_scale) * half_frequency + drive.frequency;
    return std::make_pair(f, frequency);
  });
  r.averaged = true;
  return r;
}

DecayRate decay_rate(const RateMatrix& rates) {
  DecayRate out;
  const double scale = rates.values.cwiseAbs().maxCoeff();
  if (rates.max_column_sum() > 1e-10 * std::max(scale, 1e-300)) {
    throw std::invalid_argument("rate matrix columns do not sum to zero");
  }
  Eigen::EigenSolver<Eigen::MatrixXd> eig(rates.values, false);
  out.eigenvalues = eig.eigenvalues();
  const double zero_tol = 1e-10 * scale;

  int zero_mode = -1;
  int zero_count = 0;
  for (int k = 0; k < out.eigenvalues.size(); ++k) {
    if (std::abs(out.eigenvalues[k]) <= zero_tol) {
      ++zero_count;
      if (zero_mode < 0 || std::abs(out.eigenvalues[k]) < std::abs(out.eigenvalues[zero_mode])) zero_mode = k;
    }
  }
  out.degenerate = zero_count > 1;
  if (zero_mode < 0) {
    // Fall back to the eigenvalue closest to zero as the conservation mode.
    out.eigenvalues.cwiseAbs().minCoeff(&zero_mode);
  }

  int pick = -1;
  for (int k = 0; k < out.eigenvalues.size(); ++k) {
    if (k == zero_mode) continue;
    if (pick < 0 || std::abs(out.eigenvalues[k]) < std::abs(out.eigenvalues[pick])) pick = k;
  }
  if (pick < 0) return out;
  out.rate = -out.eigenvalues[pick].real();
  out.imaginary = out.eigenvalues[pick].imag();
  out.complex_pair = std::abs(out.imaginary) > 1e-8;
  return out;
}

std::vector<ClusterPath> enumerate_cluster_paths(const DvrBasis& basis, int jumps, int start) {
  if (jumps < 2) throw std::invalid_argument("a cluster needs at least two jumps");
  const int n = basis.size();
  std::vector<ClusterPath> out;
  ClusterPath path;

  auto walk = [&](auto&& self, int row, int col, double cumulative) -> void {
    const int depth = static_cast<int>(path.jumps.size());
    if (depth == jumps) {
      if (row == col) {
        path.end = row;
        out.push_back(path);
      }
      return;
    }
    const bool last = depth + 1 == jumps;
    for (int horizontal = 0; horizontal < 2; ++horizontal) {
      for (int k = 0; k < n; ++k) {
        const int r = horizontal ? row : k;
        const int c = horizontal ? k : col;
        if ((horizontal ? col : row) == k) continue;
        if ((r == c) != last) continue;
        Jump j;
        j.horizontal = horizontal != 0;
        j.row = r;
        j.col = c;
        j.cumulative = basis.positions[r] - basis.positions[c];
        j.charge = j.cumulative - cumulative;
        j.element = horizontal ? basis.transitions(c, col) : basis.transitions(r, row);
        path.jumps.push_back(j);
        self(self, r, c, j.cumulative);
        path.jumps.pop_back();
      }
    }
  };

  for (int s = 0; s < n; ++s) {
    if (start >= 0 && s != start) continue;
    path.start = s;
    walk(walk, s, s, 0.0);
  }
  return out;
}

RateMatrix higher_order_rates(const KernelSet& ks, int max_order) {
  if (max_order < 2) throw std::invalid_argument("cluster series starts at order 2");
  const int n = ks.size();
  const DvrBasis& basis = ks.basis();
  const BathModel& bath = ks.bath();
  const DriveSpec& drive = ks.drive();
  const double beta = bath.beta();
  const double unit = bath.unit_coupling();
  const double log_ratio = std::log(2.0 * pi / (beta * bath.cutoff));

  // Sojourn integral f for every off-diagonal element; it depends only on
  // the element through p = lambda_r - lambda_c and F_r - F_c.
  Eigen::MatrixXcd sojourn = Eigen::MatrixXcd::Zero(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (r == c) continue;
      const double p = basis.positions[r] - basis.positions[c];
      const double a = 2.0 * pi * unit * p * p / beta;
      const double b = basis.onsite[r] - basis.onsite[c];
      const cplx z(a, b);
      if (!drive.driven()) {
        if (a == 0.0 && b == 0.0) {
          throw NumericalError("divergent sojourn integral on a neutral off-diagonal element", 0.0);
        }
        sojourn(r, c) = 1.0 / z;
        continue;
      }
      // The Bessel factor has the drive period, so the tail is a geometric
      // series over periods.
      const double period = drive.period();
      const cplx denominator = 1.0 - std::exp(-z * period);
      if (std::abs(denominator) < 1e-14) {
        throw NumericalError("resonant undamped sojourn integral", std::abs(denominator));
      }
      const double scale = p * 2.0 * drive.amplitude / drive.frequency;
      const double half = 0.5 * drive.frequency;
      auto g = [&](double tau) { return std::cyl_bessel_j(0.0, std::abs(scale * std::sin(half * tau))); };
      const double width = panel_width(std::abs(b) + std::abs(scale) * half + drive.frequency);
      const double re = detail::integrate_panels(
          [&](double tau) { return g(tau) * std::exp(-a * tau) * std::cos(b * tau); }, 0.0, period, width);
      const double im = detail::integrate_panels(
          [&](double tau) { return -g(tau) * std::exp(-a * tau) * std::sin(b * tau); }, 0.0, period, width);
      sojourn(r, c) = cplx(re, im) / denominator;
    }
  }

  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(n, n);
  const cplx half_i(0.0, 0.5);

  for (int order = 2; order <= max_order; ++order) {
    const cplx order_factor = std::pow(half_i, order);
    for (int start = 0; start < n; ++start) {
      // Depth-first walk carrying the running product.
      auto walk = [&](auto&& self, int row, int col, double cumulative, int depth, cplx weight) -> void {
        const bool last = depth + 1 == order;
        for (int horizontal = 0; horizontal < 2; ++horizontal) {
          for (int k = 0; k < n; ++k) {
            if ((horizontal ? col : row) == k) continue;
            const int r = horizontal ? row : k;
            const int c = horizontal ? k : col;
            if ((r == c) != last) continue;
            const double element = horizontal ? basis.transitions(c, col) : basis.transitions(r, row);
            if (element == 0.0) continue;
            const double p = basis.positions[r] - basis.positions[c];
            const double xi = p - cumulative;
            const double sign = horizontal ? -1.0 : 1.0;
            const double alpha = unit * xi * xi;
            cplx w = weight * (sign * element * std::exp(alpha * log_ratio)) *
                     std::polar(1.0, -pi * sign * unit * xi * p);
            if (last) {
              total(r, start) += w * order_factor;
            } else {
              w *= sojourn(r, c);
              self(self, r, c, p, depth + 1, w);
            }
          }
        }
      };
      walk(walk, start, start, 0.0, 0, cplx(1.0, 0.0));
    }
  }

  RateMatrix out;
  out.values = Eigen::MatrixXd::Zero(n, n);
  out.averaged = true;
  out.order = max_order;
  out.drive = drive;
  const double magnitude = total.cwiseAbs().maxCoeff();
  for (int mu = 0; mu < n; ++mu) {
    for (int nu = 0; nu < n; ++nu) {
      const cplx v = total(nu, mu);
      if (std::abs(v.imag()) > 1e-8 * std::max(std::abs(v), 1e-6 * magnitude)) {
        throw NumericalError("cluster series rate is not real", std::abs(v.imag()) / std::abs(v));
      }
      if (nu != mu) out.values(nu, mu) = v.real();
    }
  }
  finish(out);
  for (int mu = 0; mu < n; ++mu) {
    out.diagonal_mismatch = std::max(out.diagonal_mismatch, std::abs(total(mu, mu).real() - out.values(mu, mu)));
  }
  return out;
}

SeriesResult converged_higher_order_rates(const KernelSet& ks, int order_limit, double relative_change) {
  SeriesResult result;
  result.rates = higher_order_rates(ks, 2);
  double previous = decay_rate(result.rates).rate;
  for (int order = 3; order <= order_limit; ++order) {
    RateMatrix next = higher_order_rates(ks, order);
    const double rate = decay_rate(next).rate;
    result.rates = std::move(next);
    result.order = order;
    if (std::abs(rate - previous) < relative_change * std::abs(rate)) {
      result.converged = true;
      return result;
    }
    previous = rate;
  }
  return result;
}

}  // namespace dvrgme
