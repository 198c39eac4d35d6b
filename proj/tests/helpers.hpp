#pragma once

#include <memory>

#include "dvrgme/bath.hpp"
#include "dvrgme/dvr.hpp"

namespace testing_helpers {

/// Two localized states at -+separation/2 with on-site energies -+bias/2.
inline dvrgme::DvrBasis two_level(double delta, double bias = 0.0, double separation = 2.0) {
  dvrgme::DvrBasis b;
  b.positions = Eigen::Vector2d(-0.5 * separation, 0.5 * separation);
  b.transform = Eigen::Matrix2d::Identity();
  b.transitions = Eigen::Matrix2d::Zero();
  b.transitions(0, 1) = b.transitions(1, 0) = delta;
  b.onsite = Eigen::Vector2d(-0.5 * bias, 0.5 * bias);
  return b;
}

/// Pure state with real amplitudes.
inline dvrgme::InitialState pure_state(const Eigen::VectorXd& amplitude) {
  dvrgme::InitialState s;
  s.populations = amplitude.cwiseAbs2();
  for (int a = 0; a < amplitude.size(); ++a) {
    for (int b = a + 1; b < amplitude.size(); ++b) {
      if (amplitude[a] * amplitude[b] != 0.0) s.coherences.push_back({a, b, amplitude[a] * amplitude[b]});
    }
  }
  return s;
}

inline std::shared_ptr<const dvrgme::CorrelationFunction> no_bath() {
  return std::make_shared<dvrgme::HighTemperatureCorrelation>(dvrgme::BathModel{0.0, 10.0, 1.0});
}

}  // namespace testing_helpers
