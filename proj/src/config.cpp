#include "rnls/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace rnls {

bool SimulationConfig::operator==(const SimulationConfig& o) const {
  return nl.sigma == o.nl.sigma && nl.lambda == o.nl.lambda && basis == o.basis &&
         scheme.scheme == o.scheme.scheme && scheme.equation == o.scheme.equation && scheme.dt == o.scheme.dt &&
         scheme.t_final == o.scheme.t_final && scheme.check_every == o.scheme.check_every &&
         scheme.blowup_multiple == o.scheme.blowup_multiple && initial == o.initial &&
         ground_state == o.ground_state && output_dir == o.output_dir &&
         checkpoint_every == o.checkpoint_every && virial_weight == o.virial_weight;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(x)) {
    throw ConfigError(key + ": expected a finite number, got '" + v + "'");
  }
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const long x = std::strtol(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE || x < -2147483647L || x > 2147483647L) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
  return int(x);
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Field {
  std::function<void(SimulationConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const SimulationConfig&)> get;
};

#define RNLS_DOUBLE(path)                                                                         \
  Field {                                                                                         \
    [](SimulationConfig& c, const std::string& k, const std::string& v) { c.path = to_double(k, v); }, \
        [](const SimulationConfig& c) { return fmt(c.path); }                                     \
  }
#define RNLS_INT(path)                                                                         \
  Field {                                                                                      \
    [](SimulationConfig& c, const std::string& k, const std::string& v) { c.path = to_int(k, v); }, \
        [](const SimulationConfig& c) { return std::to_string(c.path); }                       \
  }
#define RNLS_STRING(path)                                                                       \
  Field {                                                                                       \
    [](SimulationConfig& c, const std::string&, const std::string& v) { c.path = v; },          \
        [](const SimulationConfig& c) { return c.path; }                                        \
  }

const std::vector<std::pair<std::string, Field>>& table() {
  static const std::vector<std::pair<std::string, Field>> t = {
      {"sigma", RNLS_DOUBLE(nl.sigma)},
      {"lambda", RNLS_DOUBLE(nl.lambda)},
      {"basis.n_hermite", RNLS_INT(basis.n_hermite)},
      {"basis.m_quad", RNLS_INT(basis.m_quad)},
      {"basis.n_z", RNLS_INT(basis.n_z)},
      {"basis.l_z", RNLS_DOUBLE(basis.l_z)},
      {"basis.n_theta", RNLS_INT(basis.n_theta)},
      {"scheme.name",
       Field{[](SimulationConfig& c, const std::string&, const std::string& v) { c.scheme.scheme = parse_scheme(v); },
             [](const SimulationConfig& c) { return to_string(c.scheme.scheme); }}},
      {"scheme.equation",
       Field{[](SimulationConfig& c, const std::string& k, const std::string& v) {
               if (v == "nls") c.scheme.equation = Equation::NLS;
               else if (v == "nls2") c.scheme.equation = Equation::NLS2;
               else throw ConfigError(k + ": expected nls or nls2, got '" + v + "'");
             },
             [](const SimulationConfig& c) { return std::string(c.scheme.equation == Equation::NLS ? "nls" : "nls2"); }}},
      {"scheme.dt", RNLS_DOUBLE(scheme.dt)},
      {"scheme.t_final", RNLS_DOUBLE(scheme.t_final)},
      {"scheme.check_every", RNLS_INT(scheme.check_every)},
      {"scheme.blowup_multiple", RNLS_DOUBLE(scheme.blowup_multiple)},
      {"initial.kind", RNLS_STRING(initial.kind)},
      {"initial.amplitude", RNLS_DOUBLE(initial.amplitude)},
      {"initial.y_width", RNLS_DOUBLE(initial.y_width)},
      {"initial.z_width", RNLS_DOUBLE(initial.z_width)},
      {"initial.z_velocity", RNLS_DOUBLE(initial.z_velocity)},
      {"initial.path", RNLS_STRING(initial.path)},
      {"initial.amplitude_factor", RNLS_DOUBLE(initial.amplitude_factor)},
      {"ground_state.d", RNLS_DOUBLE(ground_state.d)},
      {"ground_state.max_iter", RNLS_INT(ground_state.max_iter)},
      {"ground_state.tol", RNLS_DOUBLE(ground_state.tol)},
      {"ground_state.y_width", RNLS_DOUBLE(ground_state.y_width)},
      {"ground_state.z_width", RNLS_DOUBLE(ground_state.z_width)},
      {"output.dir", RNLS_STRING(output_dir)},
      {"output.checkpoint_every", RNLS_INT(checkpoint_every)},
      {"virial.weight", RNLS_STRING(virial_weight)},
  };
  return t;
}

const Field* find(const std::string& key) {
  for (const auto& [k, f] : table())
    if (k == key) return &f;
  return nullptr;
}

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& kv : table()) out.push_back(kv.first);
  return out;
}

void set_config_value(SimulationConfig& cfg, const std::string& key, const std::string& value) {
  const Field* f = find(key);
  if (!f) throw ConfigError("unknown key '" + key + "'");
  f->set(cfg, key, value);
}

SimulationConfig parse_config(const std::string& text) {
  SimulationConfig cfg;
  std::vector<std::string> errs;
  std::map<std::string, int> seen;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        errs.push_back(where + "malformed section header");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errs.push_back(where + "expected 'key = value'");
      continue;
    }
    const std::string key = (section.empty() ? "" : section + ".") + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (seen.count(key)) {
      errs.push_back(where + "duplicate key '" + key + "' (first on line " + std::to_string(seen[key]) + ")");
      continue;
    }
    seen[key] = lineno;
    try {
      set_config_value(cfg, key, value);
    } catch (const ConfigError& e) {
      errs.push_back(where + e.what());
    }
  }
  try {
    validate(cfg, false);
  } catch (const ConfigError& e) {
    errs.push_back(e.what());
  }
  if (!errs.empty()) {
    std::string msg = "configuration rejected:";
    for (const auto& e : errs) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  return cfg;
}

SimulationConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IOError("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

void validate(const SimulationConfig& c, bool check_files) {
  std::vector<std::string> errs;
  const auto collect = [&](auto&& fn) {
    try {
      fn();
    } catch (const ConfigError& e) {
      errs.push_back(e.what());
    }
  };
  collect([&] { c.basis.validate(); });
  collect([&] { c.nl.validate(true); });
  collect([&] { c.scheme.validate(); });
  const auto& ic = c.initial;
  if (ic.kind == "gaussian") {
    if (!(ic.y_width > 0) || !(ic.z_width > 0)) errs.push_back("initial Gaussian widths must be positive");
  } else if (ic.kind == "checkpoint") {
    if (ic.path.empty()) errs.push_back("initial.kind = checkpoint needs initial.path");
  } else if (ic.kind == "ground_state_scaled") {
    if (!(ic.amplitude_factor > 0)) errs.push_back("initial.amplitude_factor must be positive");
    if (c.nl.lambda != -1.0) errs.push_back("ground_state_scaled data needs lambda = -1");
  } else {
    errs.push_back("initial.kind must be gaussian, checkpoint or ground_state_scaled, got '" + ic.kind + "'");
  }
  if (check_files && !ic.path.empty() && ic.kind != "gaussian" && !std::filesystem::exists(ic.path)) {
    errs.push_back("initial.path '" + ic.path + "' does not exist");
  }
  if (c.ground_state.d < 0) errs.push_back("ground_state.d must be >= 0");
  if (c.ground_state.max_iter < 1) errs.push_back("ground_state.max_iter must be >= 1");
  if (!(c.ground_state.tol > 0)) errs.push_back("ground_state.tol must be positive");
  if (c.output_dir.empty()) errs.push_back("output.dir must not be empty");
  if (c.checkpoint_every < 0) errs.push_back("output.checkpoint_every must be >= 0");
  if (c.virial_weight != "z2" && c.virial_weight.rfind("truncated:", 0) != 0) {
    errs.push_back("virial.weight must be z2 or truncated:R");
  }
  if (!errs.empty()) {
    std::string msg;
    for (std::size_t i = 0; i < errs.size(); ++i) msg += (i ? "; " : "") + errs[i];
    throw ConfigError(msg);
  }
}

std::string serialize(const SimulationConfig& cfg) {
  std::ostringstream os;
  std::string section;
  for (const auto& [key, f] : table()) {
    const auto dot = key.find('.');
    const std::string sec = dot == std::string::npos ? "" : key.substr(0, dot);
    const std::string name = dot == std::string::npos ? key : key.substr(dot + 1);
    if (sec != section) {
      os << "\n[" << sec << "]\n";
      section = sec;
    }
    os << name << " = " << f.get(cfg) << "\n";
  }
  return os.str();
}

}  // namespace rnls
