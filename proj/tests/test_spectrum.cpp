#include "doctest.h"

#include <cmath>

#include "dvrgme/errors.hpp"
#include "dvrgme/spectrum.hpp"

using namespace dvrgme;

TEST_CASE("potential has minima at +-d0/2 with depth E_B") {
  const PotentialSpec spec{1.4};
  const double half = 0.5 * spec.minima_separation();
  CHECK(half == doctest::Approx(std::sqrt(8.0 * 1.4)).epsilon(1e-14));
  CHECK(potential_value(half, spec) == doctest::Approx(-1.4).epsilon(1e-14));
  CHECK(potential_value(-half, spec) == doctest::Approx(-1.4).epsilon(1e-14));
  CHECK(potential_value(0.0, spec) == 0.0);
  // Harmonic frequency at the minima is omega_0 = 1: V'' = 3q^2/(16 E_B) - 1/2.
  const double h = 1e-4;
  const double curvature =
      (potential_value(half + h, spec) - 2.0 * potential_value(half, spec) + potential_value(half - h, spec)) / (h * h);
  CHECK(curvature == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("doublet structure and mean gap at E_B = 1.4") {
  const Spectrum s = solve_spectrum(PotentialSpec{1.4}, GridSpec{}, 8);
  REQUIRE(s.levels() == 8);
  for (int n = 1; n < 8; ++n) CHECK(s.energies[n] > s.energies[n - 1]);
  CHECK(s.mean_gap() == doctest::Approx(0.815).epsilon(0.01));
  const Eigen::VectorXd split = s.splittings();
  CHECK(split[0] > 0.0);
  CHECK(split[0] < split[1]);
  CHECK(s.energies[3] < 0.0);  // both lower doublets lie below the barrier top
  CHECK(s.above_barrier);      // E_8 is more than 1 above the barrier top
  CHECK_FALSE(solve_spectrum(PotentialSpec{1.4}, GridSpec{}, 4).above_barrier);
}

TEST_CASE("extrapolated energies agree with a much finer grid") {
  const PotentialSpec spec{1.4};
  const Spectrum coarse = solve_spectrum(spec, GridSpec{0.0, 1024}, 6);
  const Spectrum fine = solve_spectrum(spec, GridSpec{0.0, 8192}, 6);
  for (int n = 0; n < 6; ++n) CHECK(std::abs(coarse.energies[n] - fine.energies[n]) < 1e-7);
  // The lower splitting is a small difference of large numbers.
  CHECK(coarse.splittings()[0] == doctest::Approx(fine.splittings()[0]).epsilon(1e-4));
}

TEST_CASE("Thomas-Reiche-Kuhn sum rule for the position matrix") {
  // sum_m (E_m - E_n) |<n|q|m>|^2 = hbar^2 / (2M) = 1/2, saturated by enough levels.
  const Spectrum s = solve_spectrum(PotentialSpec{1.4}, GridSpec{12.0, 8192}, 20);
  for (int n = 0; n < 4; ++n) {
    double sum = 0.0;
    for (int m = 0; m < s.levels(); ++m) sum += (s.energies[m] - s.energies[n]) * s.position(n, m) * s.position(n, m);
    CHECK(sum == doctest::Approx(0.5).epsilon(1e-4));
  }
}

TEST_CASE("position matrix parity and phase convention") {
  const Spectrum s = solve_spectrum(PotentialSpec{1.4}, GridSpec{}, 8);
  const Eigen::MatrixXd& q = s.position;
  CHECK((q - q.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  for (int m = 0; m < 8; ++m) {
    for (int n = 0; n < 8; ++n) {
      if ((m + n) % 2 == 0) CHECK(q(m, n) == 0.0);
    }
  }
  for (int i = 0; i < 8; i += 2) CHECK(q(i, i + 1) > 0.0);
  CHECK((position_matrix(s) - q).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("deep wells follow anharmonic perturbation theory") {
  // About a minimum V = -E_B + x^2/2 + g x^3 + k x^4 with g^2 = 1/(32 E_B) and
  // k = 1/(64 E_B); second order gives E_0 + E_B = 1/2 - 1/(32 E_B) and a
  // level spacing 1 - 3/(16 E_B). The remainder is O(1/E_B^2).
  const double eb = 4.0;
  const Spectrum s = solve_spectrum(PotentialSpec{eb}, GridSpec{}, 4);
  CHECK(std::abs(s.energies[0] + eb - (0.5 - 1.0 / (32.0 * eb))) < 1e-3);
  CHECK(std::abs(s.mean_gap() - (1.0 - 3.0 / (16.0 * eb))) < 6e-3);
  CHECK(s.splittings()[0] < 1e-7);
  // Deeper still, the lower doublet can no longer be resolved in double precision.
  CHECK_THROWS_AS(solve_spectrum(PotentialSpec{10.0}, GridSpec{}, 4), NumericalError);
}

TEST_CASE("spectrum rejects invalid input") {
  CHECK_THROWS_AS(solve_spectrum(PotentialSpec{0.0}, GridSpec{}, 4), std::invalid_argument);
  CHECK_THROWS_AS(solve_spectrum(PotentialSpec{1.4}, GridSpec{}, 3), std::invalid_argument);
  CHECK_THROWS_AS(solve_spectrum(PotentialSpec{1.4}, GridSpec{2.0, 2048}, 4), std::invalid_argument);
  CHECK_THROWS_AS(solve_spectrum(PotentialSpec{1.4}, GridSpec{0.0, 16}, 4), std::invalid_argument);
  CHECK_THROWS_AS(solve_spectrum(PotentialSpec{1.4}, GridSpec{0.0, 40}, 4), NumericalError);
}
