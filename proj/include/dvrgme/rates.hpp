#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "dvrgme/kernels.hpp"

namespace dvrgme {

/// Markovian generator d rho_nu / dt = sum_mu Gamma_{nu mu} rho_mu.
struct RateMatrix {
  Eigen::MatrixXd values;
  bool averaged = false;
  int order = 2;              // highest cluster order included
  DriveSpec drive;
  bool negative_rates = false;  // some off-diagonal entry below -1e-14 * max|Gamma|
  double diagonal_mismatch = 0.0;  // direct return-path sum vs. column-sum rule

  int size() const { return static_cast<int>(values.rows()); }
  double max_column_sum() const;
  /// Row-major CSV preceded by `# key = value` metadata lines.
  void write_csv(std::ostream& out) const;
};

/// Gamma_{nu mu}(t) = int_0^inf H_{nu mu}(t, t - tau) dtau. `tau_max` <= 0
/// picks the lag where every kernel envelope fell below 1e-10.
RateMatrix instantaneous_rates(const KernelSet& kernels, double t, double tau_max = 0.0);

/// Drive-period average of the instantaneous rates, with the drive phase
/// average carried by a J0 Bessel factor.
RateMatrix averaged_rates(const KernelSet& kernels);

struct DecayRate {
  double rate = 0.0;
  double imaginary = 0.0;
  bool complex_pair = false;    // |Im| of the selected eigenvalue above 1e-8
  bool degenerate = false;      // more than one conservation-level zero mode
  Eigen::VectorXcd eigenvalues;
};

/// Negated real part of the eigenvalue closest to zero once the conservation
/// zero mode (|lambda| < 1e-10 max|Gamma|) is removed.
DecayRate decay_rate(const RateMatrix& rates);

/// One jump of a path on the N x N lattice of density-matrix elements.
struct Jump {
  bool horizontal = false;  // second (column) index changes
  int row = 0;              // element (row, col) reached by this jump
  int col = 0;
  double charge = 0.0;      // xi_j
  double cumulative = 0.0;  // p_j
  double element = 0.0;     // transition element Delta of the changed index
};

struct ClusterPath {
  int start = 0;  // diagonal element (start, start)
  int end = 0;    // diagonal element (end, end)
  std::vector<Jump> jumps;
};

/// All n-jump paths from a diagonal element back to a diagonal element that
/// avoid the diagonal in between. Each jump changes one index to any other
/// value. `start` < 0 enumerates every start state.
std::vector<ClusterPath> enumerate_cluster_paths(const DvrBasis& basis, int jumps, int start = -1);

/// Cluster series of averaged Markovian rates under the high-temperature
/// correlation function, orders 2..max_order. The correlation parameters
/// come from kernels.bath(); the drive from kernels.drive().
RateMatrix higher_order_rates(const KernelSet& kernels, int max_order);

/// Adds orders until the decay rate moves by less than `relative_change`.
struct SeriesResult {
  RateMatrix rates;
  int order = 2;
  bool converged = false;
};
SeriesResult converged_higher_order_rates(const KernelSet& kernels, int order_limit,
                                          double relative_change = 0.01);

}  // namespace dvrgme
