#pragma once

#include <Eigen/Dense>
#include <vector>

#include "dvrgme/spectrum.hpp"

namespace dvrgme {

/// Eigenbasis of the position operator restricted to the lowest N levels.
///
/// States are ordered by ascending position eigenvalue, so for N = 4 the
/// order is (alpha_1, alpha_2, beta_2, beta_1): outermost left, inner left,
/// inner right, outermost right.
struct DvrBasis {
  Eigen::VectorXd positions;    // lambda_mu, ascending
  Eigen::MatrixXd transform;    // row mu holds <mu|n> over the energy basis
  Eigen::MatrixXd transitions;  // Delta_{mu nu}: off-diagonal H = -Delta/2, zero diagonal
  Eigen::VectorXd onsite;       // F_mu

  int size() const { return static_cast<int>(positions.size()); }
  bool is_left(int mu) const { return positions[mu] < 0.0; }
  /// Reassembled DVR Hamiltonian: F on the diagonal, -Delta/2 off it.
  Eigen::MatrixXd hamiltonian() const;
};

/// Diagonalises the truncated position matrix and rotates diag(E) into that
/// basis. Sign convention: the k-th state of a well, counted from the outer
/// wall, has a positive component on the even energy state 2k-1.
DvrBasis build_dvr(const Eigen::MatrixXd& position, const Eigen::VectorXd& energies);

/// Closed-form four-level DVR for b = 0, energies measured from the centre of
/// the lower doublet (E1 + E2)/2 = 0.
struct FourLevelParameters {
  double a11 = 0.0;
  double a22 = 0.0;
  double a12 = 0.0;
  double lower_splitting = 0.0;  // Delta_1
  double upper_splitting = 0.0;  // Delta_2
  double mean_gap = 0.0;         // omega-bar_0
};

struct FourLevelClosedForm {
  double u = 0.0;
  double v = 0.0;
  DvrBasis basis;
};

FourLevelClosedForm four_level_closed_form(const FourLevelParameters& p);

struct Coherence {
  int first = 0;
  int second = 0;
  double value = 0.0;  // Re rho_{first second}(t0), first < second
};

struct InitialState {
  Eigen::VectorXd populations;
  std::vector<Coherence> coherences;
  double projection_norm = 1.0;
  bool truncation_leak = false;  // projection norm below 0.999
  bool cross_well = false;       // a stored coherence links the two wells with |value| > 1e-6
};

/// |L1><L1| with |L1> = (|1> - |2>)/sqrt(2), expanded in the DVR basis.
/// All diagonal entries and every off-diagonal pair above 1e-14 are kept.
InitialState localized_initial_state(const DvrBasis& basis, const Spectrum& spectrum);

/// Total population of the states with negative position eigenvalue.
double left_population(const Eigen::VectorXd& populations, const DvrBasis& basis);

}  // namespace dvrgme
