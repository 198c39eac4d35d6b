#include "dvrgme/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

namespace dvrgme {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) parts.push_back(trim(item));
  return parts;
}

double to_double(const std::string& s) {
  double value = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) throw std::invalid_argument("expected a number, got '" + s + "'");
  return value;
}

int to_int(const std::string& s) {
  int value = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end) throw std::invalid_argument("expected an integer, got '" + s + "'");
  return value;
}

std::vector<double> to_amplitudes(const std::string& s) {
  if (s.find(':') != std::string::npos) {
    const auto parts = split(s, ':');
    if (parts.size() != 3) throw std::invalid_argument("range must read start:stop:count");
    const double start = to_double(parts[0]);
    const double stop = to_double(parts[1]);
    const int count = to_int(parts[2]);
    if (count < 1) throw std::invalid_argument("range count must be positive");
    if (count == 1) return {start};
    std::vector<double> values(count);
    for (int k = 0; k < count; ++k) values[k] = start + (stop - start) * k / (count - 1);
    return values;
  }
  std::vector<double> values;
  for (const auto& part : split(s, ',')) values.push_back(to_double(part));
  if (values.empty()) throw std::invalid_argument("empty list");
  return values;
}

std::string format(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return buffer;
}

}  // namespace

ConfigError::ConfigError(int line, const std::string& message)
    : std::invalid_argument(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

double RunConfig::internal_amplitude(double amplitude) const {
  return length_unit == LengthUnit::harmonic ? amplitude : amplitude / potential.minima_separation();
}

void RunConfig::validate() const {
  auto positive = [](double v, const char* key) {
    if (!(v > 0.0)) throw ConfigError(0, std::string(key) + " must be positive");
  };
  positive(potential.barrier_height, "barrier_height");
  positive(bath.cutoff, "cutoff");
  positive(bath.temperature, "temperature");
  positive(frequency, "frequency");
  positive(step, "step");
  if (bath.friction < 0.0) throw ConfigError(0, "gamma must be non-negative");
  if (grid.points < 16) throw ConfigError(0, "grid_points must be at least 16");
  if (grid.extent < 0.0) throw ConfigError(0, "grid_extent must be non-negative");
  if (levels.empty()) throw ConfigError(0, "levels must not be empty");
  for (int n : levels) {
    if (n < 2 || n % 2 != 0) throw ConfigError(0, "levels must be even and at least 2");
  }
  for (double s : amplitudes) {
    if (s < 0.0) throw ConfigError(0, "amplitudes must be non-negative");
  }
  if (mode != Mode::rate_vs_n && levels.size() != 1) {
    throw ConfigError(0, "levels lists are only allowed in mode rate-vs-n");
  }
  if ((mode == Mode::gme || mode == Mode::markov || mode == Mode::rate_vs_n) && amplitudes.size() != 1) {
    throw ConfigError(0, "mode " + to_string(mode) + " needs a single amplitude");
  }
  if (n_max < 2) throw ConfigError(0, "n_max must be at least 2");
  if (t_mem > 0.0 && t_end > 0.0 && t_mem > t_end) throw ConfigError(0, "t_mem must not exceed t_end");
  if (stride < 1) throw ConfigError(0, "stride must be positive");
}

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::gme: return "gme";
    case Mode::markov: return "markov";
    case Mode::avg_rates: return "avg-rates";
    case Mode::higher_order: return "higher-order";
    case Mode::rate_vs_n: return "rate-vs-n";
  }
  return "?";
}

Mode parse_mode(const std::string& text) {
  for (Mode m : {Mode::gme, Mode::markov, Mode::avg_rates, Mode::higher_order, Mode::rate_vs_n}) {
    if (text == to_string(m)) return m;
  }
  if (text == "rate_vs_N" || text == "rate_vs_n") return Mode::rate_vs_n;
  throw std::invalid_argument("unknown mode '" + text + "'");
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  using Setter = std::function<void(const std::string&)>;
  auto number = [](double& field) { return Setter([&field](const std::string& v) { field = to_double(v); }); };
  auto integer = [](int& field) { return Setter([&field](const std::string& v) { field = to_int(v); }); };
  const std::map<std::string, Setter> setters{
      {"barrier_height", number(cfg.potential.barrier_height)},
      {"grid_points", integer(cfg.grid.points)},
      {"grid_extent", number(cfg.grid.extent)},
      {"gamma", number(cfg.bath.friction)},
      {"cutoff", number(cfg.bath.cutoff)},
      {"temperature", number(cfg.bath.temperature)},
      {"frequency", number(cfg.frequency)},
      {"phase", number(cfg.phase)},
      {"step", number(cfg.step)},
      {"t_end", number(cfg.t_end)},
      {"t_mem", number(cfg.t_mem)},
      {"burn_in", number(cfg.burn_in)},
      {"n_max", integer(cfg.n_max)},
      {"levels",
       [&](const std::string& v) {
         cfg.levels.clear();
         for (const auto& part : split(v, ',')) cfg.levels.push_back(to_int(part));
       }},
      {"amplitudes", [&](const std::string& v) { cfg.amplitudes = to_amplitudes(v); }},
      {"mode", [&](const std::string& v) { cfg.mode = parse_mode(v); }},
      {"length_unit",
       [&](const std::string& v) {
         if (v == "harmonic") cfg.length_unit = LengthUnit::harmonic;
         else if (v == "separation") cfg.length_unit = LengthUnit::separation;
         else throw std::invalid_argument("expected harmonic or separation");
       }},
      {"correlation",
       [&](const std::string& v) {
         if (v == "exact") cfg.high_temperature = false;
         else if (v == "high-temperature") cfg.high_temperature = true;
         else throw std::invalid_argument("expected exact or high-temperature");
       }},
      {"stride",
       [&](const std::string& v) {
         const int s = to_int(v);
         if (s < 1) throw std::invalid_argument("must be positive");
         cfg.stride = static_cast<std::size_t>(s);
       }},
      {"output", [&](const std::string& v) { cfg.output = v; }},
  };

  std::istringstream in(text);
  std::string raw;
  int line = 0;
  std::map<std::string, int> seen;
  while (std::getline(in, raw)) {
    ++line;
    const std::string body = trim(raw.substr(0, raw.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected key = value");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError(line, "unknown key '" + key + "'");
    if (seen.count(key)) throw ConfigError(line, "duplicate key '" + key + "' (first on line " + std::to_string(seen[key]) + ")");
    seen[key] = line;
    if (value.empty()) throw ConfigError(line, "missing value for '" + key + "'");
    try {
      it->second(value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(line, key + ": " + e.what());
    }
  }
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    // Point at the offending key when it was set explicitly.
    const std::string message = e.what();
    for (const auto& [key, at] : seen) {
      if (message.rfind(key, 0) == 0) throw ConfigError(at, message);
    }
    throw;
  }
  return cfg;
}

std::vector<std::string> describe(const RunConfig& cfg) {
  auto list = [](const auto& values) {
    std::string out;
    for (std::size_t k = 0; k < values.size(); ++k) out += (k ? "," : "") + format(values[k]);
    return out;
  };
  return {
      "mode = " + to_string(cfg.mode),
      "barrier_height = " + format(cfg.potential.barrier_height),
      "grid_points = " + std::to_string(cfg.grid.points),
      "grid_extent = " + format(cfg.grid.extent),
      "gamma = " + format(cfg.bath.friction),
      "cutoff = " + format(cfg.bath.cutoff),
      "temperature = " + format(cfg.bath.temperature),
      "correlation = " + std::string(cfg.high_temperature ? "high-temperature" : "exact"),
      "levels = " + list(cfg.levels),
      "amplitudes = " + list(cfg.amplitudes),
      "length_unit = " + std::string(cfg.length_unit == LengthUnit::harmonic ? "harmonic" : "separation"),
      "frequency = " + format(cfg.frequency),
      "phase = " + format(cfg.phase),
      "step = " + format(cfg.step),
      "t_end = " + format(cfg.t_end),
      "t_mem = " + format(cfg.t_mem),
      "burn_in = " + format(cfg.burn_in),
      "n_max = " + std::to_string(cfg.n_max),
  };
}

}  // namespace dvrgme
