#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dvrgme/config.hpp"
#include "dvrgme/dvr.hpp"
#include "dvrgme/kernels.hpp"

namespace dvrgme {

inline constexpr const char* kVersion = "1.0.0";

/// Everything that depends on the potential, truncation and bath but not on
/// the drive.
struct System {
  Spectrum spectrum;
  DvrBasis basis;
  InitialState init;
  std::shared_ptr<const CorrelationFunction> correlation;
};

/// The exact Q is tabulated out to the lag where the most weakly coupled
/// pair has lost all memory.
System build_system(const PotentialSpec& potential, const GridSpec& grid, int levels, const BathModel& bath,
                    bool high_temperature = false);

KernelSet make_kernels(const System& system, const DriveSpec& drive);

/// Zero amplitude means no drive at all.
DriveSpec make_drive(double amplitude, double frequency, double phase);

struct SweepOutcome {
  int status = 0;  // 0 ok, 1 invalid input, 2 numerical failure
  std::string message;
  std::vector<std::string> files;
};

/// Runs the configured study and writes its CSV into `directory`
/// (rates_vs_s.csv, rate_vs_N.csv or population.csv). On failure the rows
/// computed so far are kept and the file ends with `# INCOMPLETE`.
SweepOutcome run_sweep(const RunConfig& cfg, const std::string& directory);

}  // namespace dvrgme
