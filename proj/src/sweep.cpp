#include "dvrgme/sweep.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "dvrgme/errors.hpp"
#include "dvrgme/gme.hpp"
#include "dvrgme/rates.hpp"

namespace dvrgme {

namespace {

std::string format(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return buffer;
}

void write_header(std::ostream& out, const RunConfig& cfg) {
  out << "# dvrgme " << kVersion << '\n';
  for (const auto& line : describe(cfg)) out << "# " << line << '\n';
}

// Writes rows as they are produced so that a failure keeps earlier points.
class CsvSink {
 public:
  CsvSink(const std::filesystem::path& path, const RunConfig& cfg, const std::string& columns)
      : out_(path), path_(path.string()) {
    if (!out_) throw std::invalid_argument("cannot write " + path_);
    write_header(out_, cfg);
    out_ << columns << '\n';
  }
  void row(const std::vector<double>& values) {
    for (std::size_t k = 0; k < values.size(); ++k) out_ << (k ? "," : "") << format(values[k]);
    out_ << '\n';
    out_.flush();
  }
  void comment(const std::string& text) { out_ << "# " << text << '\n'; }
  std::ostream& stream() { return out_; }
  const std::string& path() const { return path_; }

 private:
  std::ofstream out_;
  std::string path_;
};

double average_decay_rate(const System& system, const DriveSpec& drive) {
  return decay_rate(averaged_rates(make_kernels(system, drive))).rate;
}

SweepOutcome fail(CsvSink* sink, int status, const std::string& message) {
  if (sink) sink->comment("INCOMPLETE: " + message);
  SweepOutcome outcome;
  outcome.status = status;
  outcome.message = message;
  if (sink) outcome.files.push_back(sink->path());
  return outcome;
}

}  // namespace

System build_system(const PotentialSpec& potential, const GridSpec& grid, int levels, const BathModel& bath,
                    bool high_temperature) {
  bath.validate();
  System system;
  system.spectrum = solve_spectrum(potential, grid, levels);
  system.basis = build_dvr(system.spectrum.position, system.spectrum.energies);
  system.init = localized_initial_state(system.basis, system.spectrum);
  if (high_temperature) {
    system.correlation = std::make_shared<HighTemperatureCorrelation>(bath);
  } else {
    double weight = std::numeric_limits<double>::infinity();
    for (int mu = 0; mu < levels; ++mu) {
      for (int nu = mu + 1; nu < levels; ++nu) {
        if (system.basis.transitions(nu, mu) == 0.0) continue;
        const double d = system.basis.positions[nu] - system.basis.positions[mu];
        weight = std::min(weight, d * d);
      }
    }
    system.correlation = std::make_shared<QTable>(QTable::for_weight(bath, std::isfinite(weight) ? weight : 1.0));
  }
  return system;
}

KernelSet make_kernels(const System& system, const DriveSpec& drive) {
  return KernelSet(system.basis, system.correlation, drive);
}

DriveSpec make_drive(double amplitude, double frequency, double phase) {
  if (amplitude == 0.0) return DriveSpec{};
  return DriveSpec::sinusoidal(amplitude, frequency, phase);
}

SweepOutcome run_sweep(const RunConfig& cfg, const std::string& directory) {
  try {
    cfg.validate();
    std::filesystem::create_directories(directory);
  } catch (const std::exception& e) {
    return fail(nullptr, 1, e.what());
  }
  const std::filesystem::path dir(directory);
  std::unique_ptr<CsvSink> sink;
  try {
    switch (cfg.mode) {
      case Mode::avg_rates:
      case Mode::higher_order: {
        const bool high = cfg.high_temperature || cfg.mode == Mode::higher_order;
        const System system = build_system(cfg.potential, cfg.grid, cfg.levels.front(), cfg.bath, high);
        sink = std::make_unique<CsvSink>(dir / "rates_vs_s.csv", cfg, "s,rate");
        for (double s : cfg.amplitudes) {
          const KernelSet ks = make_kernels(system, make_drive(cfg.internal_amplitude(s), cfg.frequency, cfg.phase));
          const RateMatrix rates =
              cfg.mode == Mode::avg_rates ? averaged_rates(ks) : higher_order_rates(ks, cfg.n_max);
          sink->row({s, decay_rate(rates).rate});
        }
        break;
      }
      case Mode::rate_vs_n: {
        sink = std::make_unique<CsvSink>(dir / "rate_vs_N.csv", cfg, "N,rate");
        const DriveSpec drive = make_drive(cfg.internal_amplitude(cfg.amplitudes.front()), cfg.frequency, cfg.phase);
        for (int n : cfg.levels) {
          const System system = build_system(cfg.potential, cfg.grid, n, cfg.bath, cfg.high_temperature);
          sink->row({static_cast<double>(n), average_decay_rate(system, drive)});
        }
        break;
      }
      case Mode::gme:
      case Mode::markov: {
        const System system =
            build_system(cfg.potential, cfg.grid, cfg.levels.front(), cfg.bath, cfg.high_temperature);
        const DriveSpec drive = make_drive(cfg.internal_amplitude(cfg.amplitudes.front()), cfg.frequency, cfg.phase);
        const KernelSet ks = make_kernels(system, drive);
        const double reference = decay_rate(averaged_rates(ks)).rate;
        PropagationSpec spec;
        spec.step = cfg.step;
        spec.horizon = cfg.t_end > 0.0 ? cfg.t_end : std::min(5.0 / reference, 1e5);
        spec.memory = std::min(cfg.t_mem, spec.horizon);
        const Trajectory traj =
            cfg.mode == Mode::gme ? propagate_gme(ks, system.init, spec) : markov_reference(ks, system.init, spec);
        const double burn_in = cfg.burn_in >= 0.0 ? cfg.burn_in : 0.1 * spec.horizon;
        const DecayFit fit = fit_decay_rate(traj, burn_in, 0.5, drive.driven() ? drive.period() : 0.0);

        std::string columns = "t";
        for (int mu = 1; mu <= ks.size(); ++mu) columns += ",rho_" + std::to_string(mu);
        sink = std::make_unique<CsvSink>(dir / "population.csv", cfg, columns + ",P_L");
        sink->comment("step_used = " + format(traj.step));
        sink->comment("memory_used = " + format(traj.memory));
        sink->comment("averaged_rate = " + format(reference));
        sink->comment("fitted_rate = " + format(fit.rate));
        sink->comment("fit_residual = " + format(fit.residual));
        sink->comment(std::string("fit_flagged = ") + (fit.flagged ? "true" : "false"));
        for (std::size_t k = 0; k < traj.samples(); k += cfg.stride) {
          std::vector<double> row{traj.times[k]};
          for (int mu = 0; mu < ks.size(); ++mu) row.push_back(traj.populations(static_cast<Eigen::Index>(k), mu));
          row.push_back(traj.left[k]);
          sink->row(row);
        }
        break;
      }
    }
  } catch (const NumericalError& e) {
    return fail(sink.get(), 2, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(sink.get(), 1, e.what());
  } catch (const std::exception& e) {
    return fail(sink.get(), 2, e.what());
  }
  SweepOutcome outcome;
  outcome.files.push_back(sink->path());
  return outcome;
}

}  // namespace dvrgme
