#include "doctest.h"

#include <cmath>
#include <numbers>

#include "dvrgme/bath.hpp"

using namespace dvrgme;
using std::numbers::pi;

TEST_CASE("quadrature and Gamma-function routes to Q agree") {
  for (const BathModel bath : {BathModel{0.1, 10.0, 0.1}, BathModel{0.1, 10.0, 1.0}, BathModel{0.05, 5.0, 0.02},
                               BathModel{0.2, 20.0, 2.0}}) {
    for (double t : {1e-3, 0.05, 0.3, 1.0, 4.0, 25.0, 150.0}) {
      CAPTURE(bath.temperature);
      CAPTURE(t);
      const auto numeric = bath_correlation(t, bath);
      const auto closed = bath_correlation_closed_form(t, bath);
      CHECK(std::abs(numeric.real() - closed.real()) <= 1e-8 * std::abs(closed.real()) + 1e-14);
      CHECK(std::abs(numeric.imag() - closed.imag()) <= 1e-8 * std::abs(closed.imag()) + 1e-14);
    }
  }
}

TEST_CASE("Q is Hermitian in time and vanishes at zero lag") {
  const BathModel bath{0.1, 10.0, 0.3};
  CHECK(bath_correlation(0.0, bath) == std::complex<double>(0.0, 0.0));
  for (double t : {0.2, 3.0}) {
    CHECK(bath_correlation(-t, bath) == std::conj(bath_correlation(t, bath)));
    CHECK(bath_correlation_closed_form(-t, bath) == std::conj(bath_correlation_closed_form(t, bath)));
  }
}

TEST_CASE("Re Q grows quadratically at short times") {
  const BathModel bath{0.1, 10.0, 5.0};
  const double t = 1e-4;
  const double ratio = bath_correlation(2.0 * t, bath).real() / bath_correlation(t, bath).real();
  CHECK(ratio == doctest::Approx(4.0).epsilon(1e-5));
}

TEST_CASE("high-temperature form is the long-time asymptote") {
  const BathModel bath{0.1, 10.0, 2.0};
  const double t = 40.0;
  const auto exact = bath_correlation_closed_form(t, bath);
  const auto high = high_temp_Q(t, bath);
  CHECK(exact.imag() == doctest::Approx(high.imag()).epsilon(3e-3));
  // d Re Q / dt = gamma T - 2 gamma T / (pi omega_c t) + O(t^-2).
  for (double late : {40.0, 400.0}) {
    const double slope = bath_correlation_closed_form(late + 0.5, bath).real() -
                         bath_correlation_closed_form(late - 0.5, bath).real();
    const double expected = bath.friction * bath.temperature * (1.0 - 2.0 / (pi * bath.cutoff * late));
    CHECK(slope == doctest::Approx(expected).epsilon(1e-5));
  }
  CHECK(std::abs(high.real() - exact.real()) < 0.01 * exact.real());
}

TEST_CASE("high-temperature Q literal values") {
  const BathModel bath{0.2, 8.0, 1.5};
  const double a = 0.2 / (2.0 * pi);
  const auto q = high_temp_Q(3.0, bath);
  CHECK(q.real() == doctest::Approx(2.0 * a * (pi * 3.0 * 1.5 + std::log(8.0 / (1.5 * 2.0 * pi)))).epsilon(1e-14));
  CHECK(q.imag() == doctest::Approx(pi * a).epsilon(1e-14));
  CHECK(high_temp_Q(-3.0, bath).imag() == doctest::Approx(-pi * a).epsilon(1e-14));
  CHECK_FALSE(HighTemperatureCorrelation(bath).valid());  // gamma above 0.1
  CHECK(HighTemperatureCorrelation(BathModel{0.1, 8.0, 1.5}).valid());
  CHECK_FALSE(HighTemperatureCorrelation(BathModel{0.1, 10.0, 0.1}).valid());
}

TEST_CASE("effective coupling matches the imaginary-part plateau") {
  const BathModel bath{0.1, 10.0, 0.1};
  for (double xi : {0.5, 3.6, 7.0}) {
    const double plateau = xi * xi * bath_correlation_closed_form(1e7, bath).imag();
    CHECK(plateau == doctest::Approx(pi * effective_coupling(xi, bath, 1.0)).epsilon(1e-7));
    // The reference length only relabels alpha.
    CHECK(effective_coupling(xi, bath, 2.5) == doctest::Approx(effective_coupling(xi, bath, 1.0)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(effective_coupling(1.0, bath, 0.0), std::invalid_argument);
}

TEST_CASE("spectral density") {
  const BathModel bath{0.1, 10.0, 0.1};
  CHECK(spectral_density(0.0, bath) == 0.0);
  CHECK(spectral_density(10.0, bath) == doctest::Approx(0.1 * 10.0 / std::exp(1.0)).epsilon(1e-14));
}

TEST_CASE("tabulated Q") {
  const BathModel bath{0.1, 10.0, 0.1};
  const QTable table(bath, QTable::kDefaultStep, 50.0);
  SUBCASE("grid nodes carry the closed form") {
    for (std::size_t k = 0; k < table.samples(); k += 97) {
      const double t = table.step() * static_cast<double>(k);
      CHECK(std::abs(table.imag_sample(k) - bath.friction / pi * std::atan(bath.cutoff * t)) < 1e-12);
    }
  }
  SUBCASE("interpolation between nodes") {
    double worst = 0.0;
    for (double t = 0.0013; t < 50.0; t += 0.0371) {
      worst = std::max(worst, std::abs(table.value(t) - bath_correlation_closed_form(t, bath)));
    }
    CHECK(worst < 1e-7);
  }
  SUBCASE("beyond the horizon and at negative lag") {
    CHECK(table.value(80.0) == bath_correlation_closed_form(80.0, bath));
    CHECK(table.value(-1.234) == std::conj(table.value(1.234)));
  }
  SUBCASE("horizon from the coupling weight") {
    const QTable sized = QTable::for_weight(bath, 1.0);
    CHECK(sized.horizon() > 0.0);
    CHECK(sized.value(sized.horizon()).real() >= std::log(1e10));
  }
}

TEST_CASE("decay lag") {
  const BathModel bath{0.1, 10.0, 0.1};
  const HighTemperatureCorrelation q(bath);
  const double lag = q.decay_lag(2.0, std::log(1e8));
  CHECK(2.0 * q.value(lag).real() >= std::log(1e8));
  CHECK(2.0 * q.value(0.99 * lag).real() < std::log(1e8));
  CHECK(std::isinf(HighTemperatureCorrelation(BathModel{0.0, 10.0, 0.1}).decay_lag(2.0, 1.0)));
}

TEST_CASE("bath validation") {
  CHECK_THROWS_AS(BathModel({-0.1, 10.0, 0.1}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(BathModel({0.1, 0.0, 0.1}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(BathModel({0.1, 10.0, 0.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(QTable(BathModel{}, 0.0, 1.0), std::invalid_argument);
}
