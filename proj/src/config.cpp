#include "mvsim/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "mvsim/errors.hpp"
#include "mvsim/scenarios.hpp"

namespace mvsim {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& v, const char* what) {
  throw ConfigError("config key '" + key + "': cannot parse '" + v + "' as " + what);
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) bad_value(key, v, "a number");
  return x;
}

long long to_int(const std::string& key, const std::string& v) {
  long long x = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) bad_value(key, v, "an integer");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "on" || v == "1") return true;
  if (v == "false" || v == "off" || v == "0") return false;
  bad_value(key, v, "a boolean");
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

AdvectionScheme to_scheme(const std::string& key, const std::string& v) {
  if (v == "upwind") return AdvectionScheme::upwind;
  if (v == "central") return AdvectionScheme::central;
  bad_value(key, v, "upwind|central");
}

const char* scheme_name(AdvectionScheme s) { return s == AdvectionScheme::upwind ? "upwind" : "central"; }

struct Entry {
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
};

template <class T>
Entry num(T RunConfig::*m) {
  return {[m](const RunConfig& c) {
            if constexpr (std::is_floating_point_v<T>) return fmt(c.*m);
            else return std::to_string(c.*m);
          },
          [m](RunConfig& c, const std::string& k, const std::string& v) {
            if constexpr (std::is_floating_point_v<T>) c.*m = to_double(k, v);
            else if constexpr (std::is_unsigned_v<T>) {
              unsigned long long x = 0;
              const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
              if (r.ec != std::errc() || r.ptr != v.data() + v.size()) bad_value(k, v, "a non-negative integer");
              c.*m = static_cast<T>(x);
            } else {
              const long long x = to_int(k, v);
              if (x < std::numeric_limits<T>::min() || x > std::numeric_limits<T>::max()) bad_value(k, v, "an int");
              c.*m = static_cast<T>(x);
            }
          }};
}

Entry pnum(double SimParams::*m) {
  return {[m](const RunConfig& c) { return fmt(c.params.*m); },
          [m](RunConfig& c, const std::string& k, const std::string& v) { c.params.*m = to_double(k, v); }};
}

Entry pbool(bool SimParams::*m) {
  return {[m](const RunConfig& c) { return std::string(c.params.*m ? "true" : "false"); },
          [m](RunConfig& c, const std::string& k, const std::string& v) { c.params.*m = to_bool(k, v); }};
}

Entry pscheme(AdvectionScheme SimParams::*m) {
  return {[m](const RunConfig& c) { return std::string(scheme_name(c.params.*m)); },
          [m](RunConfig& c, const std::string& k, const std::string& v) { c.params.*m = to_scheme(k, v); }};
}

Entry str(std::string RunConfig::*m) {
  return {[m](const RunConfig& c) { return c.*m; },
          [m](RunConfig& c, const std::string&, const std::string& v) { c.*m = v; }};
}

const std::vector<std::pair<std::string, Entry>>& table() {
  static const std::vector<std::pair<std::string, Entry>> t = {
      {"lx", num(&RunConfig::lx)},
      {"ly", num(&RunConfig::ly)},
      {"nx", num(&RunConfig::nx)},
      {"ny", num(&RunConfig::ny)},
      {"eps", pnum(&SimParams::eps)},
      {"f_diffusion", pnum(&SimParams::f_diffusion)},
      {"dt", pnum(&SimParams::dt)},
      {"t_end", pnum(&SimParams::t_end)},
      {"cfl_safety", pnum(&SimParams::cfl_safety)},
      {"poisson_tol", pnum(&SimParams::poisson_tol)},
      {"helmholtz_tol", pnum(&SimParams::helmholtz_tol)},
      {"hyperviscosity", pbool(&SimParams::hyperviscosity_on)},
      {"cutoff_k", pnum(&SimParams::cutoff_k)},
      {"viscosity", pnum(&SimParams::viscosity)},
      {"semi_implicit", pbool(&SimParams::semi_implicit)},
      {"couple_u", pbool(&SimParams::couple_u)},
      {"m_advection", pscheme(&SimParams::m_advection)},
      {"f_advection", pscheme(&SimParams::f_advection)},
      {"u_advection", pscheme(&SimParams::u_advection)},
      {"solver",
       {[](const RunConfig& c) { return std::string(c.params.solver == SolverKind::cg ? "cg" : "spectral"); },
        [](RunConfig& c, const std::string& k, const std::string& v) {
          if (v == "cg") c.params.solver = SolverKind::cg;
          else if (v == "spectral") c.params.solver = SolverKind::spectral;
          else bad_value(k, v, "spectral|cg");
        }}},
      {"magnetic_force",
       {[](const RunConfig& c) {
          return std::string(c.params.magnetic_force == MagneticForceForm::stress ? "stress" : "consistent");
        },
        [](RunConfig& c, const std::string& k, const std::string& v) {
          if (v == "stress") c.params.magnetic_force = MagneticForceForm::stress;
          else if (v == "consistent") c.params.magnetic_force = MagneticForceForm::consistent;
          else bad_value(k, v, "consistent|stress");
        }}},
      {"scenario", str(&RunConfig::scenario)},
      {"u_amplitude", num(&RunConfig::u_amplitude)},
      {"f_init", str(&RunConfig::f_init)},
      {"f_amplitude", num(&RunConfig::f_amplitude)},
      {"mollify_delta", num(&RunConfig::mollify_delta)},
      {"offsphere_amplitude", num(&RunConfig::offsphere_amplitude)},
      {"m_noise", num(&RunConfig::m_noise)},
      {"seed", num(&RunConfig::seed)},
      {"hext", str(&RunConfig::hext)},
      {"hext_amplitude", num(&RunConfig::hext_amplitude)},
      {"out_dir", str(&RunConfig::out_dir)},
      {"csv_path", str(&RunConfig::csv_path)},
      {"csv_stride", num(&RunConfig::csv_stride)},
      {"snapshot_stride", num(&RunConfig::snapshot_stride)},
      {"threads", num(&RunConfig::threads)},
  };
  return t;
}

}  // namespace

void RunConfig::validate() const {
  if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly))
    throw ConfigError("domain lengths lx, ly must be positive");
  if (nx < 4 || ny < 4) throw ConfigError("nx and ny must be at least 4");
  if (nx > 4096 || ny > 4096) throw ConfigError("nx and ny must not exceed 4096");
  try {
    params.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  validate_scenario(scenario);
  if (f_init != "identity" && f_init != "curl" && f_init != "zero")
    throw ConfigError("f_init must be identity, curl or zero");
  if (hext != "none" && hext != "uniform" && hext != "gradient") throw ConfigError("hext must be none, uniform or gradient");
  if (!(mollify_delta >= 0.0)) throw ConfigError("mollify_delta must be non-negative");
  if (!(m_noise >= 0.0)) throw ConfigError("m_noise must be non-negative");
  if (!std::isfinite(u_amplitude) || !std::isfinite(f_amplitude) || !std::isfinite(hext_amplitude) ||
      !std::isfinite(offsphere_amplitude))
    throw ConfigError("amplitudes must be finite");
  if (csv_stride < 1) throw ConfigError("csv_stride must be at least 1");
  if (snapshot_stride < 0) throw ConfigError("snapshot_stride must be non-negative");
  if (threads < 1) throw ConfigError("threads must be at least 1");
  if (csv_path.empty()) throw ConfigError("csv_path must not be empty");
}

RunConfig parse_config(std::istream& in) {
  std::map<std::string, const Entry*> index;
  for (const auto& [k, e] : table()) index[k] = &e;
  RunConfig c;
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = index.find(key);
    if (it == index.end()) throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError("config key '" + key + "' given twice");
    if (value.empty()) throw ConfigError("config key '" + key + "' has an empty value");
    it->second->set(c, key, value);
  }
  c.validate();
  return c;
}

RunConfig parse_config_string(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(f);
}

std::string serialize_config(const RunConfig& c) {
  std::string out;
  for (const auto& [k, e] : table()) out += k + " = " + e.get(c) + "\n";
  return out;
}

int effective_threads(const RunConfig& c) {
  const char* env = std::getenv("MVSIM_THREADS");
  if (env == nullptr || *env == '\0') return c.threads;
  const std::string v = trim(env);
  const long long n = to_int("MVSIM_THREADS", v);
  if (n < 1 || n > 1024) throw ConfigError("MVSIM_THREADS must be a positive integer");
  return static_cast<int>(n);
}

}  // namespace mvsim
