#pragma once

#include <stdexcept>
#include <string>

namespace dvrgme {

/// Raised when a numerical procedure (quadrature, propagation, eigen-solve)
/// cannot reach its tolerance. The message carries the achieved residual.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace dvrgme
