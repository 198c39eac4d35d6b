#include "dvrgme/dvr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dvrgme {

namespace {

constexpr double kTieGap = 1e-10;

Eigen::Index dominant_component(const Eigen::VectorXd& v) {
  Eigen::Index idx = 0;
  v.cwiseAbs().maxCoeff(&idx);
  return idx;
}

}  // namespace

Eigen::MatrixXd DvrBasis::hamiltonian() const {
  Eigen::MatrixXd h = -0.5 * transitions;
  h.diagonal() = onsite;
  return h;
}

DvrBasis build_dvr(const Eigen::MatrixXd& position, const Eigen::VectorXd& energies) {
  const Eigen::Index n = position.rows();
  if (position.cols() != n || energies.size() != n || n < 2) {
    throw std::invalid_argument("position matrix and energies must have matching size >= 2");
  }
  const double scale = std::max(1.0, position.cwiseAbs().maxCoeff());
  if ((position - position.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw std::invalid_argument("position matrix is not symmetric");
  }
  for (Eigen::Index k = 1; k < n; ++k) {
    if (energies[k] < energies[k - 1]) throw std::invalid_argument("energies must be ascending");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(position);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const Eigen::MatrixXd& vectors = eig.eigenvectors();

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (std::abs(lambda[a] - lambda[b]) < kTieGap) {
      return dominant_component(vectors.col(a)) < dominant_component(vectors.col(b));
    }
    return lambda[a] < lambda[b];
  });

  DvrBasis out;
  out.positions.resize(n);
  out.transform.resize(n, n);
  for (Eigen::Index mu = 0; mu < n; ++mu) {
    out.positions[mu] = lambda[order[mu]];
    out.transform.row(mu) = vectors.col(order[mu]).transpose();
  }

  // Rank of each state inside its well, counted from the outer wall.
  const Eigen::Index left_count = (out.positions.array() < 0.0).count();
  for (Eigen::Index mu = 0; mu < n; ++mu) {
    const Eigen::Index rank = mu < left_count ? mu : n - 1 - mu;
    Eigen::Index ref = 2 * rank;
    if (ref >= n || std::abs(out.transform(mu, ref)) < 1e-8) {
      ref = dominant_component(out.transform.row(mu).transpose());
    }
    if (out.transform(mu, ref) < 0.0) out.transform.row(mu) *= -1.0;
  }

  const Eigen::MatrixXd h = out.transform * energies.asDiagonal() * out.transform.transpose();
  out.onsite = h.diagonal();
  out.transitions = -2.0 * h;
  out.transitions.diagonal().setZero();
  out.transitions = 0.5 * (out.transitions + out.transitions.transpose());
  return out;
}

FourLevelClosedForm four_level_closed_form(const FourLevelParameters& p) {
  if (p.a12 == 0.0) throw std::invalid_argument("a12 = 0 gives a degenerate four-level construction");
  const double root = std::sqrt((p.a11 - p.a22) * (p.a11 - p.a22) + 4.0 * p.a12 * p.a12);
  const double lambda1 = 0.5 * (-(p.a11 + p.a22) - root);
  const double lambda2 = 0.5 * (-(p.a11 + p.a22) + root);

  FourLevelClosedForm out;
  out.u = (p.a11 + lambda1) / p.a12;
  out.v = 1.0 / std::sqrt(1.0 + out.u * out.u);
  const double u = out.u;
  const double v = out.v;
  const double v2 = v * v;

  // Order: alpha_1, alpha_2, beta_2, beta_1.
  enum { A1 = 0, A2 = 1, B2 = 2, B1 = 3 };
  DvrBasis& b = out.basis;
  b.positions = Eigen::Vector4d(lambda1, lambda2, -lambda2, -lambda1);

  const double r = v / std::sqrt(2.0);
  b.transform.resize(4, 4);
  b.transform.row(A1) << r, -r, -u * r, u * r;
  b.transform.row(A2) << u * r, -u * r, r, -r;
  b.transform.row(B2) << u * r, u * r, r, r;
  b.transform.row(B1) << r, r, -u * r, -u * r;

  const double d1 = p.lower_splitting;
  const double d2 = p.upper_splitting;
  b.transitions = Eigen::Matrix4d::Zero();
  auto set = [&](int i, int j, double value) {
    b.transitions(i, j) = value;
    b.transitions(j, i) = value;
  };
  set(A1, B1, v2 * (d1 + u * u * d2));
  set(A2, B2, v2 * (u * u * d1 + d2));
  set(A1, B2, v2 * u * (d1 - d2));
  set(A2, B1, v2 * u * (d1 - d2));
  set(A1, A2, 2.0 * v2 * u * p.mean_gap);
  set(B1, B2, 2.0 * v2 * u * p.mean_gap);

  b.onsite = Eigen::Vector4d(u * u * v2 * p.mean_gap, v2 * p.mean_gap, v2 * p.mean_gap,
                             u * u * v2 * p.mean_gap);
  return out;
}

InitialState localized_initial_state(const DvrBasis& basis, const Spectrum& spectrum) {
  const int n = basis.size();
  if (spectrum.levels() < n) throw std::invalid_argument("spectrum has fewer levels than the basis");

  Eigen::VectorXd localized = Eigen::VectorXd::Zero(n);
  localized[0] = 1.0 / std::sqrt(2.0);
  localized[1] = -1.0 / std::sqrt(2.0);
  const Eigen::VectorXd amplitude = basis.transform * localized;

  InitialState out;
  out.populations = amplitude.cwiseAbs2();
  out.projection_norm = out.populations.sum();
  out.truncation_leak = out.projection_norm < 0.999;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double value = amplitude[a] * amplitude[b];
      if (std::abs(value) <= 1e-14) continue;
      out.coherences.push_back({a, b, value});
      if (basis.is_left(a) != basis.is_left(b) && std::abs(value) > 1e-6) out.cross_well = true;
    }
  }
  return out;
}

double left_population(const Eigen::VectorXd& populations, const DvrBasis& basis) {
  if (populations.size() != basis.size()) throw std::invalid_argument("population vector size mismatch");
  double sum = 0.0;
  for (int mu = 0; mu < basis.size(); ++mu) {
    if (basis.is_left(mu)) sum += populations[mu];
  }
  return sum;
}

}  // namespace dvrgme
