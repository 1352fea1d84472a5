#include "optomech/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "optomech/errors.hpp"

namespace optomech {

using nlohmann::json;

namespace {

struct UnitSpec {
  const char* suffix;
  double factor;  // multiplier to reach the SI base of the expected kind
};

// Longest suffix first where one unit ends in another (kg before g).
const UnitSpec* units_for(QuantityKind kind, std::size_t& count) {
  static const UnitSpec power[] = {{"W", 1.0}};
  static const UnitSpec freq[] = {{"Hz", 1.0}};
  static const UnitSpec temp[] = {{"K", 1.0}};
  static const UnitSpec mass[] = {{"kg", 1.0}, {"g", 1e-3}};
  switch (kind) {
    case QuantityKind::power: count = 1; return power;
    case QuantityKind::frequency: count = 1; return freq;
    case QuantityKind::temperature: count = 1; return temp;
    case QuantityKind::mass: count = 2; return mass;
    default: count = 0; return nullptr;
  }
}

bool metric_prefix(const std::string& p, double& factor) {
  if (p.empty()) { factor = 1.0; return true; }
  if (p == "f") { factor = 1e-15; return true; }
  if (p == "p") { factor = 1e-12; return true; }
  if (p == "n") { factor = 1e-9; return true; }
  if (p == "u" || p == "µ") { factor = 1e-6; return true; }
  if (p == "m") { factor = 1e-3; return true; }
  if (p == "k") { factor = 1e3; return true; }
  if (p == "M") { factor = 1e6; return true; }
  if (p == "G") { factor = 1e9; return true; }
  if (p == "T") { factor = 1e12; return true; }
  return false;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

}  // namespace

double parse_quantity(const std::string& text, QuantityKind kind) {
  const std::string s = trim(text);
  if (s.empty()) throw ParseError("empty quantity string");
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || errno == ERANGE) {
    throw ParseError("cannot parse quantity '" + text + "'");
  }
  const std::string tail = trim(std::string(end));
  if (tail.empty()) return value;  // bare number, SI base unit

  if (kind == QuantityKind::dimensionless) {
    throw ParseError("quantity '" + text + "' must be a bare number");
  }
  std::size_t n_units = 0;
  const UnitSpec* units = units_for(kind, n_units);
  for (std::size_t i = 0; i < n_units; ++i) {
    const std::string suffix = units[i].suffix;
    if (tail.size() >= suffix.size() &&
        tail.compare(tail.size() - suffix.size(), suffix.size(), suffix) == 0) {
      const std::string prefix = tail.substr(0, tail.size() - suffix.size());
      double factor = 1.0;
      if (!metric_prefix(prefix, factor)) {
        throw ParseError("unknown metric prefix '" + prefix + "' in quantity '" + text + "'");
      }
      return value * factor * units[i].factor;
    }
  }
  throw ParseError("quantity '" + text + "' has the wrong unit for this field");
}

OptomechSystem RunConfig::system() const {
  if (!coupling_hz) {
    throw std::invalid_argument("config has no system.coupling_hz (run a calibration first)");
  }
  OptomechSystem sys{cavity_freq_hz, cavity_linewidth_hz, mech_freq_hz, mech_linewidth_hz,
                     *coupling_hz, mass_kg};
  sys.validate();
  return sys;
}

SystemWithoutCoupling RunConfig::system_without_coupling() const {
  SystemWithoutCoupling sys{cavity_freq_hz, cavity_linewidth_hz, mech_freq_hz, mech_linewidth_hz,
                            mass_kg};
  sys.validate();
  return sys;
}

MeasurementConfig RunConfig::measurement(double power_w) const {
  MeasurementConfig m{power_w, efficiency, temperature_k, n_avg,
                      freq_start_hz, freq_stop_hz, n_bins};
  m.validate();
  return m;
}

RunConfig default_run_config() {
  RunConfig cfg;
  cfg.cavity_freq_hz = 6.707e9;
  cfg.cavity_linewidth_hz = 10.56e6;
  cfg.mech_freq_hz = 9.357e6;
  cfg.mech_linewidth_hz = 24.4;
  cfg.coupling_hz = 230.0;
  cfg.mass_kg = 8.5e-14;
  cfg.powers_w = {1e-14, 6e-13, 7.8e-9};
  cfg.efficiency = 0.02;
  cfg.temperature_k = 0.04;
  cfg.n_avg = 500;
  // 4096 bins over +/-50 mechanical linewidths around the resonance.
  cfg.freq_start_hz = cfg.mech_freq_hz - 50.0 * cfg.mech_linewidth_hz;
  cfg.freq_stop_hz = cfg.mech_freq_hz + 50.0 * cfg.mech_linewidth_hz;
  cfg.n_bins = 4096;
  cfg.synth_unit = SpectrumUnit::displacement;
  cfg.seed = 1;
  cfg.out_dir = ".";
  return cfg;
}

namespace {

[[noreturn]] void unknown_key(const std::string& where, const std::string& key) {
  throw ParseError("config: unknown key '" + key + "' in " + where);
}

const json& require_key(const json& obj, const char* where, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError("config: missing required key '" + std::string(key) + "' in " +
                     std::string(where));
  }
  return *it;
}

double quantity_field(const json& v, QuantityKind kind, const std::string& name) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      return parse_quantity(v.get<std::string>(), kind);
    } catch (const ParseError& e) {
      throw ParseError("config: field '" + name + "': " + e.what());
    }
  }
  throw ParseError("config: field '" + name + "' must be a number or a quantity string");
}

std::uint64_t uint_field(const json& v, const std::string& name, std::uint64_t min_value,
                         std::uint64_t max_value) {
  if (!v.is_number_unsigned()) {
    throw ParseError("config: field '" + name + "' must be a non-negative integer");
  }
  const std::uint64_t u = v.get<std::uint64_t>();
  if (u < min_value || u > max_value) {
    throw ParseError("config: field '" + name + "' is out of range");
  }
  return u;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, json_text.size());
    const std::size_t line = 1 + std::count(json_text.begin(), json_text.begin() + upto, '\n');
    throw ParseError("config: JSON syntax error at line " + std::to_string(line) + ": " +
                     e.what());
  }
  if (!root.is_object()) throw ParseError("config: top level must be a JSON object");

  RunConfig cfg;
  for (const auto& [key, value] : root.items()) {
    if (key == "system" || key == "measurement") {
      if (!value.is_object()) throw ParseError("config: '" + key + "' must be an object");
    } else if (key == "seed") {
      cfg.seed = uint_field(value, "seed", 0, UINT64_MAX);
    } else if (key == "out_dir") {
      if (!value.is_string()) throw ParseError("config: 'out_dir' must be a string");
      cfg.out_dir = value.get<std::string>();
    } else {
      unknown_key("the top level", key);
    }
  }

  const json& sys = require_key(root, "the top level", "system");
  for (const auto& [key, value] : sys.items()) {
    if (key == "cavity_freq_hz") {
      cfg.cavity_freq_hz = quantity_field(value, QuantityKind::frequency, key);
    } else if (key == "cavity_linewidth_hz") {
      cfg.cavity_linewidth_hz = quantity_field(value, QuantityKind::frequency, key);
    } else if (key == "mech_freq_hz") {
      cfg.mech_freq_hz = quantity_field(value, QuantityKind::frequency, key);
    } else if (key == "mech_linewidth_hz") {
      cfg.mech_linewidth_hz = quantity_field(value, QuantityKind::frequency, key);
    } else if (key == "coupling_hz") {
      cfg.coupling_hz = quantity_field(value, QuantityKind::frequency, key);
    } else if (key == "mass_kg") {
      cfg.mass_kg = quantity_field(value, QuantityKind::mass, key);
    } else {
      unknown_key("the system block", key);
    }
  }
  for (const char* k : {"cavity_freq_hz", "cavity_linewidth_hz", "mech_freq_hz",
                        "mech_linewidth_hz", "mass_kg"}) {
    require_key(sys, "the system block", k);
  }

  const json& meas = require_key(root, "the top level", "measurement");
  bool saw_power = false;
  bool saw_powers = false;
  for (const auto& [key, value] : meas.items()) {
    if (key == "power_w") {
      cfg.powers_w = {quantity_field(value, QuantityKind::power, key)};
      saw_power = true;
    } else if (key == "powers_w") {
      if (!value.is_array()) throw ParseError("config: 'powers_w' must be an array");
      cfg.powers_w.clear();
      for (const auto& p : value) {
        cfg.powers_w.push_back(quantity_field(p, QuantityKind::power, "powers_w"));
      }
      saw_powers = true;
    } else if (key == "efficiency") {
      cfg.efficiency = quantity_field(value, QuantityKind::dimensionless, key);
    } else if (key == "temperature_k") {
      cfg.temperature_k = quantity_field(value, QuantityKind::temperature, key);
    } else if (key == "n_avg") {
      cfg.n_avg = static_cast<std::uint32_t>(uint_field(value, "n_avg", 1, 0xFFFFFFFFull));
    } else if (key == "freq_start_hz") {
      cfg.freq_start_hz = quantity_field(value, QuantityKind::frequency, key);
    } else if (key == "freq_stop_hz") {
      cfg.freq_stop_hz = quantity_field(value, QuantityKind::frequency, key);
    } else if (key == "n_bins") {
      cfg.n_bins = static_cast<std::size_t>(uint_field(value, "n_bins", 1, 1ull << 32));
    } else if (key == "units") {
      if (!value.is_string()) throw ParseError("config: 'units' must be a string");
      const auto unit = spectrum_unit_from(value.get<std::string>());
      if (!unit) {
        throw ParseError("config: 'units' must be 'displacement' or 'phase'");
      }
      cfg.synth_unit = *unit;
    } else {
      unknown_key("the measurement block", key);
    }
  }
  if (saw_power && saw_powers) {
    throw ParseError("config: give either 'power_w' or 'powers_w', not both");
  }
  for (const char* k :
       {"efficiency", "temperature_k", "n_avg", "freq_start_hz", "freq_stop_hz", "n_bins"}) {
    require_key(meas, "the measurement block", k);
  }

  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

}  // namespace optomech
