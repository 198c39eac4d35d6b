#include "dvrgme/gme.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "dvrgme/errors.hpp"
#include "dvrgme/rates.hpp"

namespace dvrgme {

namespace {

constexpr std::size_t kMaxTableEntries = std::size_t{1} << 26;

struct Grid {
  double step = 0.0;
  int phases = 1;  // distinct drive phases on the grid
  long steps = 0;
};

Grid make_grid(const KernelSet& ks, const PropagationSpec& spec, double step) {
  Grid g;
  g.step = step;
  if (ks.drive().driven()) {
    g.phases = static_cast<int>(std::ceil(ks.drive().period() / step - 1e-9));
    g.step = ks.drive().period() / g.phases;
  }
  g.steps = static_cast<long>(std::ceil(spec.horizon / g.step - 1e-9));
  return g;
}

void check_resolution(const KernelSet& ks, double step) {
  const double w = ks.fastest_frequency();
  if (step * w > 0.13) {
    throw std::invalid_argument("time step " + std::to_string(step) + " does not resolve frequency " +
                                std::to_string(w) + " (need step * omega <= 0.13)");
  }
}

// Breach of the trace/population tolerances.
struct Breach {
  bool hit = false;
  double residual = 0.0;
  std::string what;
};

Breach check_state(const double* y, int n, const PropagationSpec& spec, double& max_trace) {
  Breach b;
  double trace = 0.0;
  for (int i = 0; i < n; ++i) {
    trace += y[i];
    if (y[i] < -spec.population_tolerance || y[i] > 1.0 + spec.population_tolerance) {
      b.hit = true;
      b.residual = y[i];
      b.what = "population left [0, 1]";
    }
  }
  const double drift = std::abs(trace - 1.0);
  max_trace = std::max(max_trace, drift);
  if (drift > spec.trace_tolerance) {
    b.hit = true;
    b.residual = drift;
    b.what = "trace drift";
  }
  return b;
}

void fill_left(Trajectory& traj, const DvrBasis& basis) {
  traj.left.resize(traj.samples());
  for (std::size_t k = 0; k < traj.samples(); ++k) {
    traj.left[k] = left_population(traj.populations.row(static_cast<Eigen::Index>(k)).transpose(), basis);
  }
}

// Product-trapezoid weights of the memory integral. With rho linear between
// grid points, int_0^{Mh} H(t, t - tau) rho(t - tau) dtau becomes
// sum_m c_m rho(t - m h), where c_m integrates the kernel against the hat
// function of node m. `right[m]` covers [m h, (m+1) h] and `left[m]` covers
// [(m-1) h, m h]. The kernel itself is integrated by Gauss-Legendre, so its
// sharp onset on the bath cutoff scale needs no extra grid refinement.
struct MemoryWeights {
  int n = 0;
  int phases = 1;
  long lags = 0;
  std::vector<double> left;
  std::vector<double> right;

  std::size_t offset(int phase, long m) const {
    return (static_cast<std::size_t>(phase) * static_cast<std::size_t>(lags + 1) + static_cast<std::size_t>(m)) *
           static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  }
};

constexpr unsigned kNodes = 8;

MemoryWeights memory_weights(const KernelSet& ks, double h, int phases, long lags) {
  using Rule = boost::math::quadrature::gauss<double, kNodes>;
  std::vector<double> x, w;  // nodes and weights on [0, 1]
  for (std::size_t i = 0; i < Rule::abscissa().size(); ++i) {
    for (double sign : {-1.0, 1.0}) {
      x.push_back(0.5 * (1.0 + sign * Rule::abscissa()[i]));
      w.push_back(0.5 * Rule::weights()[i]);
    }
  }
  const std::size_t nodes = x.size();

  const int n = ks.size();
  const DvrBasis& basis = ks.basis();
  struct Pair {
    int nu, mu;
    double weight, charge, charge2, bias;
  };
  std::vector<Pair> pairs;
  for (int mu = 0; mu < n; ++mu) {
    for (int nu = 0; nu < n; ++nu) {
      const double delta = basis.transitions(nu, mu);
      if (nu == mu || delta == 0.0) continue;
      pairs.push_back({nu, mu, 0.5 * delta * delta, basis.positions[mu] - basis.positions[nu],
                       ks.charge_squared(nu, mu), ks.bias(mu, nu)});
    }
  }

  MemoryWeights out;
  out.n = n;
  out.phases = phases;
  out.lags = lags;
  const std::size_t block = static_cast<std::size_t>(n) * n;
  const std::size_t entries = static_cast<std::size_t>(phases) * static_cast<std::size_t>(lags + 1) * block;
  if (2 * entries > kMaxTableEntries) {
    throw std::invalid_argument("kernel table too large; shorten the memory or coarsen the step");
  }
  out.left.assign(entries, 0.0);
  out.right.assign(entries, 0.0);

  // Drive-independent factors at every quadrature node.
  const std::size_t samples = static_cast<std::size_t>(lags) * nodes;
  std::vector<double> envelope(samples * pairs.size());
  std::vector<double> bath_phase(samples * pairs.size());
  for (long j = 0; j < lags; ++j) {
    for (std::size_t i = 0; i < nodes; ++i) {
      const std::complex<double> q = ks.correlation().value((static_cast<double>(j) + x[i]) * h);
      for (std::size_t k = 0; k < pairs.size(); ++k) {
        const std::size_t at = (static_cast<std::size_t>(j) * nodes + i) * pairs.size() + k;
        envelope[at] = pairs[k].weight * std::exp(-pairs[k].charge2 * q.real());
        bath_phase[at] = pairs[k].charge2 * q.imag();
      }
    }
  }

  const DriveSpec& drive = ks.drive();
  for (int p = 0; p < phases; ++p) {
    const double t = p * h;
    for (long j = 0; j < lags; ++j) {
      double* right = &out.right[out.offset(p, j)];
      double* left = &out.left[out.offset(p, j + 1)];
      for (std::size_t i = 0; i < nodes; ++i) {
        const double tau = (static_cast<double>(j) + x[i]) * h;
        const double field = drive.driven() ? drive.integral(t - tau, t) : 0.0;
        for (std::size_t k = 0; k < pairs.size(); ++k) {
          const std::size_t at = (static_cast<std::size_t>(j) * nodes + i) * pairs.size() + k;
          const Pair& pr = pairs[k];
          const double value =
              envelope[at] * std::cos(pr.bias * tau - pr.charge * field - bath_phase[at]) * w[i] * h;
          right[pr.nu * n + pr.mu] += (1.0 - x[i]) * value;
          left[pr.nu * n + pr.mu] += x[i] * value;
        }
      }
    }
  }
  // Vanishing column sums, block by block.
  for (std::vector<double>* table : {&out.left, &out.right}) {
    for (std::size_t b = 0; b < entries; b += block) {
      double* hm = &(*table)[b];
      for (int mu = 0; mu < n; ++mu) {
        double column = 0.0;
        for (int nu = 0; nu < n; ++nu) {
          if (nu != mu) column += hm[nu * n + mu];
        }
        hm[mu * n + mu] = -column;
      }
    }
  }
  return out;
}

Trajectory run_gme(const KernelSet& ks, const InitialState& init, const PropagationSpec& spec, double step,
                   Breach& breach) {
  const int n = ks.size();
  const Grid g = make_grid(ks, spec, step);
  const double h = g.step;
  check_resolution(ks, h);

  double memory = spec.memory > 0.0 ? spec.memory : ks.memory_lag(spec.envelope_threshold);
  if (!std::isfinite(memory)) memory = spec.horizon;
  const long lags = std::max<long>(1, std::min<long>(g.steps, static_cast<long>(std::ceil(memory / h - 1e-9))));
  const MemoryWeights weights = memory_weights(ks, h, g.phases, lags);

  // rho(t_{k+1}) enters its own memory integral through right[0]; one LU per phase.
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> solvers;
  for (int p = 0; p < g.phases; ++p) {
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> c0(
        &weights.right[weights.offset(p, 0)], n, n);
    solvers.emplace_back(Eigen::MatrixXd::Identity(n, n) - 0.5 * h * Eigen::MatrixXd(c0));
  }

  Trajectory traj;
  traj.step = h;
  traj.memory = lags * h;
  traj.times.resize(g.steps + 1);
  Eigen::MatrixXd y(n, g.steps + 1);  // column k: rho(t_k)
  y.col(0) = init.populations;
  traj.times[0] = 0.0;

  Eigen::VectorXd derivative = inhomogeneity_vector(0.0, 0.0, ks, init);
  Eigen::VectorXd memory_sum(n);
  Eigen::VectorXd rhs(n);
  for (long k = 0; k < g.steps; ++k) {
    const long next = k + 1;
    const double t1 = next * h;
    const int phase = static_cast<int>(next % g.phases);
    const long reach = std::min(next, lags);

    memory_sum.setZero();
    for (long m = 1; m <= reach; ++m) {
      const double* cl = &weights.left[weights.offset(phase, m)];
      const double* cr = &weights.right[weights.offset(phase, m)];
      const bool end = m == reach;
      const double* past = y.col(next - m).data();
      for (int nu = 0; nu < n; ++nu) {
        double acc = 0.0;
        for (int mu = 0; mu < n; ++mu) {
          const double c = end ? cl[nu * n + mu] : cl[nu * n + mu] + cr[nu * n + mu];
          acc += c * past[mu];
        }
        memory_sum[nu] += acc;
      }
    }

    const Eigen::VectorXd source = inhomogeneity_vector(t1, 0.0, ks, init);
    rhs = y.col(k) + 0.5 * h * (derivative + source + memory_sum);
    y.col(next) = solvers[phase].solve(rhs);

    derivative = source + memory_sum;
    const double* c0 = &weights.right[weights.offset(phase, 0)];
    for (int nu = 0; nu < n; ++nu) {
      double acc = 0.0;
      for (int mu = 0; mu < n; ++mu) acc += c0[nu * n + mu] * y(mu, next);
      derivative[nu] += acc;
    }
    traj.times[next] = t1;

    breach = check_state(y.col(next).data(), n, spec, traj.max_trace_error);
    if (breach.hit) {
      breach.what += " at t = " + std::to_string(t1);
      return traj;
    }
  }
  traj.populations = y.transpose();
  fill_left(traj, ks.basis());
  return traj;
}

Trajectory run_markov(const KernelSet& ks, const InitialState& init, const PropagationSpec& spec, double step,
                      Breach& breach) {
  const int n = ks.size();
  const Grid g = make_grid(ks, spec, step);
  const double h = g.step;
  check_resolution(ks, h);

  std::vector<Eigen::MatrixXd> rates;
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> implicit;
  for (int p = 0; p < g.phases; ++p) {
    rates.push_back(instantaneous_rates(ks, p * h).values);
    implicit.emplace_back(Eigen::MatrixXd::Identity(n, n) - 0.5 * h * rates.back());
  }

  Trajectory traj;
  traj.step = h;
  traj.times.resize(g.steps + 1);
  traj.populations.resize(g.steps + 1, n);
  Eigen::VectorXd y = init.populations;
  traj.populations.row(0) = y.transpose();
  traj.times[0] = 0.0;
  for (long k = 0; k < g.steps; ++k) {
    const int now = static_cast<int>(k % g.phases);
    const int next = static_cast<int>((k + 1) % g.phases);
    y = implicit[next].solve(y + 0.5 * h * rates[now] * y);
    traj.times[k + 1] = (k + 1) * h;
    traj.populations.row(k + 1) = y.transpose();
    breach = check_state(y.data(), n, spec, traj.max_trace_error);
    if (breach.hit) {
      breach.what += " at t = " + std::to_string((k + 1) * h);
      return traj;
    }
  }
  fill_left(traj, ks.basis());
  return traj;
}

template <class Runner>
Trajectory with_retry(Runner&& run, const PropagationSpec& spec) {
  spec.validate();
  Breach breach;
  Trajectory traj = run(spec.step, breach);
  if (!breach.hit) return traj;
  traj = run(0.5 * spec.step, breach);
  if (!breach.hit) return traj;
  throw NumericalError("propagation tolerance breach after step halving: " + breach.what, breach.residual);
}

}  // namespace

void PropagationSpec::validate() const {
  if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
  if (!(horizon > step)) throw std::invalid_argument("horizon must exceed one step");
  if (memory > horizon) throw std::invalid_argument("memory must not exceed the horizon");
}

void Trajectory::write_csv(std::ostream& out, std::size_t stride) const {
  const auto n = populations.cols();
  out << "t";
  for (Eigen::Index mu = 0; mu < n; ++mu) out << ",rho_" << mu + 1;
  out << ",P_L\n";
  const auto precision = out.precision(12);
  for (std::size_t k = 0; k < samples(); k += std::max<std::size_t>(stride, 1)) {
    out << times[k];
    for (Eigen::Index mu = 0; mu < n; ++mu) out << ',' << populations(static_cast<Eigen::Index>(k), mu);
    out << ',' << left[k] << '\n';
  }
  out.precision(precision);
}

Trajectory propagate_gme(const KernelSet& ks, const InitialState& init, const PropagationSpec& spec) {
  if (init.populations.size() != ks.size()) throw std::invalid_argument("initial state size mismatch");
  return with_retry([&](double step, Breach& b) { return run_gme(ks, init, spec, step, b); }, spec);
}

Trajectory markov_reference(const KernelSet& ks, const InitialState& init, const PropagationSpec& spec) {
  if (init.populations.size() != ks.size()) throw std::invalid_argument("initial state size mismatch");
  return with_retry([&](double step, Breach& b) { return run_markov(ks, init, spec, step, b); }, spec);
}

DecayFit fit_decay_rate(const Trajectory& traj, double burn_in, double p_infinity, double window) {
  DecayFit fit;
  double s_t = 0.0, s_y = 0.0, s_tt = 0.0, s_ty = 0.0;
  std::vector<std::pair<double, double>> samples;
  if (window > 0.0) {
    // Block means over complete windows, stamped at the window centre.
    double start = burn_in, sum_t = 0.0, sum_p = 0.0;
    std::size_t count = 0;
    for (std::size_t k = 0; k < traj.samples(); ++k) {
      if (traj.times[k] < burn_in) continue;
      if (traj.times[k] >= start + window) {
        if (count > 0) samples.emplace_back(sum_t / count, sum_p / count);
        start += window * std::floor((traj.times[k] - start) / window);
        sum_t = sum_p = 0.0;
        count = 0;
      }
      sum_t += traj.times[k];
      sum_p += traj.left[k];
      ++count;
    }
  } else {
    for (std::size_t k = 0; k < traj.samples(); ++k) {
      if (traj.times[k] >= burn_in) samples.emplace_back(traj.times[k], traj.left[k]);
    }
  }
  std::vector<std::pair<double, double>> points;
  for (const auto& [t, p] : samples) {
    const double gap = std::abs(p - p_infinity);
    if (gap < 1e-12) continue;
    points.emplace_back(t, std::log(gap));
  }
  fit.points = points.size();
  if (points.size() < 3) {
    fit.flagged = true;
    return fit;
  }
  for (const auto& [t, y] : points) {
    s_t += t;
    s_y += y;
    s_tt += t * t;
    s_ty += t * y;
  }
  const double count = static_cast<double>(points.size());
  const double denom = count * s_tt - s_t * s_t;
  const double slope = (count * s_ty - s_t * s_y) / denom;
  const double intercept = (s_y - slope * s_t) / count;
  double sq = 0.0;
  for (const auto& [t, y] : points) {
    const double r = y - (intercept + slope * t);
    sq += r * r;
  }
  fit.rate = -slope;
  fit.residual = std::sqrt(sq / count);
  // A signal that hardly decays over the window carries no rate information.
  const double span = points.back().first - points.front().first;
  fit.flagged = !(fit.rate * span > 1e-6) || fit.residual > 0.05;
  return fit;
}

}  // namespace dvrgme
