#pragma once

#include <Eigen/Dense>

namespace dvrgme {

// Internal units throughout: hbar = M = omega_0 = 1, so the harmonic length
// x0 = sqrt(hbar / M omega_0) = 1 and energies are in units of hbar omega_0.

/// Symmetric quartic double well V(q) = q^4 / (64 E_B) - q^2 / 4.
struct PotentialSpec {
  double barrier_height = 1.4;

  /// Distance d0 between the two minima at +-d0/2.
  double minima_separation() const;
};

double potential_value(double q, const PotentialSpec& spec);

/// Uniform finite-difference grid on (-extent, extent) with Dirichlet walls.
/// extent <= 0 selects the default d0/2 + 6 harmonic lengths.
struct GridSpec {
  double extent = 0.0;
  int points = 2048;
};

struct Spectrum {
  double extent = 0.0;
  Eigen::VectorXd grid;            // sample positions of the fine grid
  double spacing = 0.0;
  Eigen::VectorXd energies;        // ascending, Richardson-extrapolated
  Eigen::MatrixXd eigenfunctions;  // columns psi_n(q_k), normalised on the grid
  Eigen::MatrixXd position;        // <m|q|n>
  double refinement_change = 0.0;  // max |E(h/2) - E(h)| before extrapolation
  bool above_barrier = false;      // some retained level lies > 1 hbar omega_0 above the barrier top

  int levels() const { return static_cast<int>(energies.size()); }
  /// Doublet splittings (E_{2i} - E_{2i-1}), i = 1..N/2.
  Eigen::VectorXd splittings() const;
  /// Mean gap between the first two doublets.
  double mean_gap() const;
};

/// Lowest `levels` eigenpairs of -1/2 d^2/dq^2 + V(q). Solves on the grid and
/// on its nested refinement, extrapolates the energies and keeps the
/// eigenfunctions of the refined grid.
///
/// Phase convention: even states are positive at their largest-|psi| sample
/// in the right well; each odd partner is chosen so that <2i-1|q|2i> > 0,
/// which makes (|2i-1> + |2i>)/sqrt(2) the right-localised combination.
Spectrum solve_spectrum(const PotentialSpec& spec, const GridSpec& grid, int levels);

/// Grid quadrature of psi_m q psi_n; equal-parity entries are exactly zero.
Eigen::MatrixXd position_matrix(const Spectrum& spectrum);

}  // namespace dvrgme
