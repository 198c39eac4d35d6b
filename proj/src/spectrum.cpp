#include "dvrgme/spectrum.hpp"

#include <lapacke.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "dvrgme/errors.hpp"

namespace dvrgme {

namespace {

struct GridSolution {
  Eigen::VectorXd grid;
  double spacing;
  Eigen::VectorXd energies;
  Eigen::MatrixXd vectors;
};

// Lowest `levels` eigenpairs of the three-point Hamiltonian on `points`
// interior nodes of (-extent, extent).
GridSolution solve_on_grid(const PotentialSpec& spec, double extent, int points, int levels) {
  GridSolution out;
  out.spacing = 2.0 * extent / (points + 1);
  out.grid.resize(points);
  const double h2 = out.spacing * out.spacing;
  std::vector<double> diag(points), off(points);
  for (int k = 0; k < points; ++k) {
    out.grid[k] = -extent + out.spacing * (k + 1);
    diag[k] = 1.0 / h2 + potential_value(out.grid[k], spec);
    off[k] = -0.5 / h2;
  }

  lapack_int found = 0;
  std::vector<double> w(points);
  std::vector<double> z(static_cast<std::size_t>(points) * levels);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(levels));
  const lapack_int info =
      LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', points, diag.data(), off.data(), 0.0, 0.0, 1,
                     levels, 0.0, &found, w.data(), z.data(), points, support.data());
  if (info != 0 || found != levels) {
    throw NumericalError("tridiagonal eigensolver failed (info " + std::to_string(info) + ")",
                         static_cast<double>(info));
  }
  out.energies = Eigen::Map<Eigen::VectorXd>(w.data(), levels);
  out.vectors = Eigen::Map<Eigen::MatrixXd>(z.data(), points, levels) / std::sqrt(out.spacing);
  return out;
}

Eigen::MatrixXd quadrature_position(const Eigen::VectorXd& grid, double spacing,
                                    const Eigen::MatrixXd& psi) {
  const int n = static_cast<int>(psi.cols());
  Eigen::MatrixXd q = psi.transpose() * grid.asDiagonal() * psi * spacing;
  for (int m = 0; m < n; ++m) {
    for (int k = 0; k < n; ++k) {
      if ((m + k) % 2 == 0) q(m, k) = 0.0;
    }
  }
  return 0.5 * (q + q.transpose());
}

void fix_phases(const Eigen::VectorXd& grid, double spacing, Eigen::MatrixXd& psi) {
  const int n = static_cast<int>(psi.cols());
  for (int s = 0; s < n; s += 2) {
    Eigen::Index best = 0;
    double largest = -1.0;
    for (Eigen::Index k = 0; k < grid.size(); ++k) {
      if (grid[k] > 0.0 && std::abs(psi(k, s)) > largest) {
        largest = std::abs(psi(k, s));
        best = k;
      }
    }
    if (psi(best, s) < 0.0) psi.col(s) *= -1.0;
    if (s + 1 < n) {
      const double coupling = (psi.col(s).array() * grid.array() * psi.col(s + 1).array()).sum() * spacing;
      if (coupling < 0.0) psi.col(s + 1) *= -1.0;
    }
  }
}

}  // namespace

double PotentialSpec::minima_separation() const { return 2.0 * std::sqrt(8.0 * barrier_height); }

double potential_value(double q, const PotentialSpec& spec) {
  const double q2 = q * q;
  return q2 * q2 / (64.0 * spec.barrier_height) - 0.25 * q2;
}

Eigen::VectorXd Spectrum::splittings() const {
  Eigen::VectorXd out(levels() / 2);
  for (int i = 0; i < out.size(); ++i) out[i] = energies[2 * i + 1] - energies[2 * i];
  return out;
}

double Spectrum::mean_gap() const {
  if (levels() < 4) throw std::logic_error("mean gap needs at least two doublets");
  return 0.5 * (energies[2] + energies[3]) - 0.5 * (energies[0] + energies[1]);
}

Spectrum solve_spectrum(const PotentialSpec& spec, const GridSpec& grid, int levels) {
  if (!(spec.barrier_height > 0.0)) throw std::invalid_argument("barrier height must be positive");
  if (levels < 2 || levels % 2 != 0) throw std::invalid_argument("level count must be even and >= 2");
  const double half_separation = 0.5 * spec.minima_separation();
  const double extent = grid.extent > 0.0 ? grid.extent : half_separation + 6.0;
  if (extent < half_separation + 5.0) {
    throw std::invalid_argument("grid extent must cover both wells plus five harmonic lengths");
  }
  if (grid.points < 8 * levels) throw std::invalid_argument("grid too coarse for the requested levels");

  const GridSolution coarse = solve_on_grid(spec, extent, grid.points, levels);
  GridSolution fine = solve_on_grid(spec, extent, 2 * grid.points + 1, levels);

  Spectrum out;
  out.extent = extent;
  out.grid = fine.grid;
  out.spacing = fine.spacing;
  out.refinement_change = (fine.energies - coarse.energies).cwiseAbs().maxCoeff();
  // Three-point Laplacian error is O(h^2); one Richardson step removes it.
  out.energies = (4.0 * fine.energies - coarse.energies) / 3.0;
  if (out.refinement_change > 1e-3) {
    throw NumericalError("spectrum not converged under grid refinement", out.refinement_change);
  }
  for (int n = 1; n < levels; ++n) {
    if (!(out.energies[n] - out.energies[n - 1] > 1e-12)) {
      throw NumericalError("degenerate levels in the double-well spectrum",
                           out.energies[n] - out.energies[n - 1]);
    }
  }

  fix_phases(fine.grid, fine.spacing, fine.vectors);
  out.eigenfunctions = std::move(fine.vectors);
  out.position = position_matrix(out);
  out.above_barrier = out.energies[levels - 1] > 1.0;
  return out;
}

Eigen::MatrixXd position_matrix(const Spectrum& spectrum) {
  return quadrature_position(spectrum.grid, spectrum.spacing, spectrum.eigenfunctions);
}

}  // namespace dvrgme
