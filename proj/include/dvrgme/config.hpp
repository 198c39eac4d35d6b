#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "dvrgme/bath.hpp"
#include "dvrgme/spectrum.hpp"

namespace dvrgme {

enum class Mode { gme, markov, avg_rates, higher_order, rate_vs_n };

/// Unit of the drive amplitude in configuration files: `harmonic` means
/// hbar omega_0 / x0 (the internal unit), `separation` means hbar omega_0 / d0.
enum class LengthUnit { harmonic, separation };

/// Rejected configuration text; `line` is 0 for whole-file problems.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

struct RunConfig {
  PotentialSpec potential;
  GridSpec grid;
  BathModel bath;
  std::vector<int> levels{4};
  std::vector<double> amplitudes{0.0};  // in the configured length unit
  double frequency = 0.815;
  double phase = 0.0;
  Mode mode = Mode::avg_rates;
  LengthUnit length_unit = LengthUnit::harmonic;
  bool high_temperature = false;  // use the high-temperature Q for the sequential modes
  double step = 0.1;
  double t_end = 0.0;    // <= 0: five averaged-rate lifetimes
  double t_mem = 0.0;    // <= 0: kernel envelope threshold
  double burn_in = -1.0; // < 0: a tenth of t_end
  int n_max = 4;
  std::size_t stride = 1;
  std::string output = ".";

  /// Drive amplitude in internal units.
  double internal_amplitude(double amplitude) const;
  void validate() const;
};

std::string to_string(Mode mode);
Mode parse_mode(const std::string& text);

/// Flat `key = value` text with `#` comments. Lists are comma separated;
/// `amplitudes` also accepts `start:stop:count`.
RunConfig parse_config(const std::string& text);

/// `key = value` lines reproducing every field, for CSV metadata.
std::vector<std::string> describe(const RunConfig& cfg);

}  // namespace dvrgme
