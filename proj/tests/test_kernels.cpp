#include "doctest.h"

#include <cmath>

#include "dvrgme/kernels.hpp"
#include "dvrgme/spectrum.hpp"
#include "helpers.hpp"

using namespace dvrgme;
using testing_helpers::no_bath;
using testing_helpers::pure_state;
using testing_helpers::two_level;

namespace {

KernelSet four_level(const DriveSpec& drive, double scale = 1.0) {
  const Spectrum s = solve_spectrum(PotentialSpec{1.4}, GridSpec{}, 4);
  DvrBasis b = build_dvr(s.position, s.energies);
  b.transitions *= scale;
  return KernelSet(b, std::make_shared<QTable>(BathModel{}, QTable::kDefaultStep, 200.0), drive);
}

}  // namespace

TEST_CASE("drive field and its integral") {
  const DriveSpec d = DriveSpec::sinusoidal(1.3, 0.815, 0.4);
  CHECK(d.driven());
  CHECK(d.period() == doctest::Approx(2.0 * M_PI / 0.815));
  // Composite Simpson oracle for the field integral.
  const double a = 0.7, b = 9.1;
  const int n = 2000;
  double sum = d.field(a) + d.field(b);
  for (int k = 1; k < n; ++k) sum += (k % 2 ? 4.0 : 2.0) * d.field(a + (b - a) * k / n);
  CHECK(d.integral(a, b) == doctest::Approx(sum * (b - a) / (3.0 * n)).epsilon(1e-10));
  CHECK(std::abs(d.integral(0.0, d.period())) < 1e-12);
  CHECK_FALSE(DriveSpec{}.driven());
  CHECK_FALSE(DriveSpec::sinusoidal(0.0, 1.0).driven());
  CHECK_THROWS_AS(DriveSpec::sinusoidal(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(DriveSpec::sinusoidal(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("undamped two-level kernel is a cosine of the bias") {
  const double delta = 0.2, bias = 0.35;
  const KernelSet ks(two_level(delta, bias), no_bath(), DriveSpec{});
  for (double tau : {0.0, 0.5, 3.0, 17.0}) {
    CHECK(ks.kernel(1, 0, tau, 0.0) == doctest::Approx(0.5 * delta * delta * std::cos(bias * tau)).epsilon(1e-14));
    CHECK(ks.kernel(0, 0, tau, 0.0) == doctest::Approx(-ks.kernel(1, 0, tau, 0.0)).epsilon(1e-14));
  }
  CHECK(std::isinf(ks.memory_lag(1e-8)));
  CHECK(ks.fastest_frequency() == doctest::Approx(bias));
}

TEST_CASE("driving phase is the integrated level difference") {
  const DriveSpec d = DriveSpec::sinusoidal(1.0, 0.815, 0.3);
  const KernelSet ks = four_level(d);
  const DvrBasis& b = ks.basis();
  const int nu = 1, mu = 2;
  const double t = 5.3, tp = 1.1;
  auto eps = [&](int k, double s) { return b.onsite[k] - b.positions[k] * d.field(s); };
  const int n = 4000;
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double s = tp + (t - tp) * k / n;
    const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    sum += w * (eps(mu, s) - eps(nu, s));
  }
  CHECK(ks.driving_phase(nu, mu, t, tp) == doctest::Approx(sum * (t - tp) / (3.0 * n)).epsilon(1e-10));
  CHECK(ks.driving_phase(mu, nu, t, tp) == doctest::Approx(-ks.driving_phase(nu, mu, t, tp)).epsilon(1e-14));
}

TEST_CASE("kernel matrices have vanishing column sums") {
  const KernelSet ks = four_level(DriveSpec::sinusoidal(1.0, 0.815));
  for (double t : {0.0, 2.0, 7.5}) {
    for (double lag : {0.0, 0.3, 4.0}) {
      const Eigen::MatrixXd h = ks.kernel_matrix(t, t - lag);
      CHECK(h.colwise().sum().cwiseAbs().maxCoeff() < 1e-15);
      for (int mu = 0; mu < 4; ++mu) CHECK(h(mu, mu) == doctest::Approx(ks.kernel(mu, mu, t, t - lag)).epsilon(1e-14));
    }
  }
}

TEST_CASE("kernels scale with the square of the tunneling elements") {
  const DriveSpec d = DriveSpec::sinusoidal(0.7, 0.815);
  const KernelSet base = four_level(d);
  const KernelSet scaled = four_level(d, 1.7);
  const Eigen::MatrixXd a = base.kernel_matrix(3.0, 1.0);
  const Eigen::MatrixXd b = scaled.kernel_matrix(3.0, 1.0);
  CHECK((b - 1.7 * 1.7 * a).cwiseAbs().maxCoeff() <= 1e-14 * b.cwiseAbs().maxCoeff());
}

TEST_CASE("memory lag bounds every kernel envelope") {
  const KernelSet ks = four_level(DriveSpec{});
  const double lag = ks.memory_lag(1e-8);
  CHECK(std::isfinite(lag));
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      if (mu == nu) continue;
      CHECK(std::exp(-ks.charge_squared(nu, mu) * ks.correlation().value(lag).real()) <= 1.001e-8);
    }
  }
}

TEST_CASE("inhomogeneity") {
  const double delta = 0.3, bias = 0.2;
  const KernelSet ks(two_level(delta, bias), no_bath(), DriveSpec{});
  const InitialState init = pure_state(Eigen::Vector2d(0.8, 0.6));

  SUBCASE("vanishes at the preparation time and conserves probability") {
    CHECK(inhomogeneity(0, 0.0, 0.0, ks, init) == 0.0);
    for (double t : {0.4, 2.0, 9.0}) CHECK(inhomogeneity_vector(t, 0.0, ks, init).sum() == doctest::Approx(0.0));
  }
  SUBCASE("equals the free coherence contribution without a bath") {
    // d rho_00/dt = Delta Im rho_01 and rho_01(t) = rho_01(0) exp(-i (F_0 - F_1) t) when the
    // populations are frozen, so the source term is Delta rho_01(0) sin((F_1 - F_0) t).
    for (double t : {0.4, 2.0, 9.0}) {
      CHECK(inhomogeneity(0, t, 0.0, ks, init) == doctest::Approx(delta * 0.48 * std::sin(bias * t)).epsilon(1e-14));
    }
  }
  SUBCASE("no coherences, no source") {
    const InitialState diag = pure_state(Eigen::Vector2d(1.0, 0.0));
    CHECK(inhomogeneity_vector(1.0, 0.0, ks, diag).cwiseAbs().maxCoeff() == 0.0);
  }
}
