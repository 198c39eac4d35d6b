#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "dvrgme/dvr.hpp"
#include "dvrgme/kernels.hpp"

namespace dvrgme {

struct PropagationSpec {
  double step = 0.1;
  double horizon = 100.0;
  double memory = 0.0;              // <= 0: lag where kernel envelopes fall below envelope_threshold
  double envelope_threshold = 1e-8;
  double trace_tolerance = 1e-6;
  double population_tolerance = 1e-6;

  void validate() const;
};

struct Trajectory {
  std::vector<double> times;
  Eigen::MatrixXd populations;  // row k: rho_{mu mu}(t_k)
  std::vector<double> left;     // P_L(t_k)
  double step = 0.0;            // step actually used
  double memory = 0.0;          // memory lag actually used
  double max_trace_error = 0.0;

  std::size_t samples() const { return times.size(); }
  /// Header `t,rho_1,...,rho_N,P_L`; every `stride`-th sample, 12 significant digits.
  void write_csv(std::ostream& out, std::size_t stride = 1) const;
};

/// Solves d rho_nu/dt = I_nu(t, t0) + sum_mu int_{t0}^t H_{nu mu}(t, t') rho_mu(t') dt'
/// on a uniform grid: product-trapezoid memory quadrature (rho piecewise
/// linear, kernel integrated exactly enough by Gauss-Legendre) and a
/// trapezoidal (implicit, second-order) step whose corrector is solved
/// exactly. For a
/// driven system the step is shortened to divide the drive period so the
/// kernels can be tabulated per drive phase. On a tolerance breach the step
/// is halved once before giving up with NumericalError.
Trajectory propagate_gme(const KernelSet& kernels, const InitialState& init, const PropagationSpec& spec);

/// Time-local master equation with the instantaneous rates Gamma(t); the
/// initial coherences are ignored.
Trajectory markov_reference(const KernelSet& kernels, const InitialState& init, const PropagationSpec& spec);

struct DecayFit {
  double rate = 0.0;
  double residual = 0.0;  // RMS of the log-linear fit residuals
  std::size_t points = 0;
  bool flagged = false;
};

/// Least-squares slope of ln|P_L - p_infinity| over t >= burn_in. With a
/// positive `window` (normally the drive period) P_L is first averaged over
/// consecutive windows, which removes the ripple at the drive frequency.
DecayFit fit_decay_rate(const Trajectory& traj, double burn_in, double p_infinity = 0.5, double window = 0.0);

}  // namespace dvrgme
