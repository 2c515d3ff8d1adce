#include "mcp/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace mcp::cli {

ConfigError::ConfigError(const std::string& source, int line, const std::string& msg)
    : ModelError(source + (line > 0 ? ":" + std::to_string(line) : "") + ": " + msg), line_(line) {}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v) {
  double x = 0.0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size() || !std::isfinite(x))
    throw std::invalid_argument("expected a finite number, got '" + v + "'");
  return x;
}

int to_int(const std::string& v) {
  int x = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size())
    throw std::invalid_argument("expected an integer, got '" + v + "'");
  return x;
}

template <class T, class F>
std::vector<T> to_list(const std::string& v, F conv) {
  std::vector<T> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(conv(trim(item)));
  if (out.empty()) throw std::invalid_argument("expected a non-empty comma-separated list");
  return out;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <class T>
std::string fmt_list(const std::vector<T>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    if constexpr (std::is_same_v<T, double>)
      s += fmt(v[i]);
    else
      s += std::to_string(v[i]);
  }
  return s;
}

struct Key {
  std::function<void(const std::string&)> set;
  std::function<std::string()> get;
};

// Ordered registry of every accepted key.
std::vector<std::pair<std::string, Key>> registry(RunConfig& c) {
  std::vector<std::pair<std::string, Key>> r;
  auto dbl = [&](const std::string& k, double& x) {
    r.push_back({k, {[&x](const std::string& v) { x = to_double(v); }, [&x] { return fmt(x); }}});
  };
  auto integer = [&](const std::string& k, int& x) {
    r.push_back({k, {[&x](const std::string& v) { x = to_int(v); }, [&x] { return std::to_string(x); }}});
  };
  auto dlist = [&](const std::string& k, std::vector<double>& x) {
    r.push_back({k, {[&x](const std::string& v) { x = to_list<double>(v, to_double); }, [&x] { return fmt_list(x); }}});
  };
  auto ilist = [&](const std::string& k, std::vector<int>& x) {
    r.push_back({k, {[&x](const std::string& v) { x = to_list<int>(v, to_int); }, [&x] { return fmt_list(x); }}});
  };
  auto& m = c.model;
  integer("model.M", m.M);
  dbl("model.J", m.J);
  dbl("model.J1", m.J1);
  dbl("model.d", m.d);
  dbl("model.g1", m.g1);
  dbl("model.g2", m.g2);
  r.push_back({"model.boundary",
               {[&m](const std::string& v) { m.boundary = boundary_from_string(v); }, [&m] { return to_string(m.boundary); }}});
  integer("ground.N", c.ground.N);
  integer("ground.levels", c.ground.levels);
  integer("polaron.site", c.polaron.site);
  integer("polaron.order", c.polaron.order);
  dlist("scan.d_grid", c.scan.d_grid);
  integer("dispersion.k_points", c.dispersion.k_points);
  auto& b = c.dynamics.bloch;
  r.push_back({"dynamics.engine",
               {[&b](const std::string& v) { b.engine = dyn::engine_from_string(v); }, [&b] { return dyn::to_string(b.engine); }}});
  r.push_back({"dynamics.initial",
               {[&b](const std::string& v) { b.initial = dyn::initial_from_string(v); }, [&b] { return dyn::to_string(b.initial); }}});
  dbl("dynamics.T", b.T);
  dbl("dynamics.dt", b.dt);
  integer("dynamics.site", b.site);
  r.push_back({"dynamics.method",
               {[&b](const std::string& v) {
                  if (v == "auto") b.method = EvolveMethod::Auto;
                  else if (v == "krylov") b.method = EvolveMethod::Krylov;
                  else if (v == "exact") b.method = EvolveMethod::Exact;
                  else throw std::invalid_argument("method must be auto, krylov or exact, got '" + v + "'");
                },
                [&b] {
                  return std::string(b.method == EvolveMethod::Auto ? "auto" : b.method == EvolveMethod::Krylov ? "krylov" : "exact");
                }}});
  r.push_back({"dynamics.max_dim",
               {[&b](const std::string& v) { b.max_dim = to_int(v); }, [&b] { return std::to_string(b.max_dim); }}});
  auto& d = c.dynamics;
  r.push_back({"dynamics.signal",
               {[&d](const std::string& v) { d.signal = dyn::signal_from_string(v); }, [&d] { return dyn::to_string(d.signal); }}});
  dbl("dynamics.threshold", d.spectrum.threshold);
  dbl("dynamics.omega_min", d.spectrum.omega_min);
  dbl("dynamics.omega_max", d.spectrum.omega_max);
  integer("dynamics.stride", d.stride);
  integer("bipolaron.r_max", c.bipolaron.r_max);
  ilist("validate.M_grid", c.validate.M_grid);
  dlist("validate.d_grid", c.validate.d_grid);
  ilist("validate.mapping_M", c.validate.mapping_M);
  dlist("validate.pt_d_grid", c.validate.pt_d_grid);
  return r;
}

void check(const RunConfig& c) {
  validate(c.model);
  if (c.ground.levels < 1) throw ModelError("ground.levels must be positive");
  if (c.polaron.order != 1 && c.polaron.order != 2) throw ModelError("polaron.order must be 1 or 2");
  if (c.polaron.site < 0 || c.polaron.site >= c.model.M) throw ModelError("polaron.site out of range");
  if (c.dispersion.k_points < 1) throw ModelError("dispersion.k_points must be positive");
  if (!(c.dynamics.bloch.T > 0.0) || !(c.dynamics.bloch.dt > 0.0)) throw ModelError("dynamics.T and dynamics.dt must be positive");
  if (c.dynamics.stride < 1) throw ModelError("dynamics.stride must be positive");
  if (c.bipolaron.r_max < 0) throw ModelError("bipolaron.r_max must be non-negative");
  for (double d : c.scan.d_grid)
    if (d < 0.0) throw ModelError("scan.d_grid entries must be non-negative");
}

}  // namespace

RunConfig parse_config(std::istream& in, const std::string& source) {
  RunConfig c;
  c.source = source;
  auto reg = registry(c);
  std::map<std::string, const Key*> index;
  for (const auto& [k, v] : reg) index[k] = &v;
  std::map<std::string, int> seen;
  std::string section, raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(source, lineno, "malformed section header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      bool known = false;
      for (const auto& [k, v] : reg) known = known || k.rfind(section + ".", 0) == 0;
      if (!known) throw ConfigError(source, lineno, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(source, lineno, "expected key = value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (section.empty()) throw ConfigError(source, lineno, "key '" + key + "' appears before any section");
    const std::string full = section + "." + key;
    const auto it = index.find(full);
    if (it == index.end()) throw ConfigError(source, lineno, "unknown key '" + key + "' in section [" + section + "]");
    if (seen.count(full))
      throw ConfigError(source, lineno, "duplicate key '" + key + "' (first set on line " + std::to_string(seen[full]) + ")");
    seen[full] = lineno;
    try {
      it->second->set(value);
    } catch (const std::exception& e) {
      throw ConfigError(source, lineno, "bad value for '" + full + "': " + e.what());
    }
    c.entries.emplace_back(full, value);
  }
  try {
    check(c);
  } catch (const ModelError& e) {
    throw ConfigError(source, 0, e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError(path, 0, "cannot open config file");
  return parse_config(f, path);
}

std::vector<std::pair<std::string, std::string>> effective_settings(const RunConfig& c) {
  RunConfig copy = c;
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [k, v] : registry(copy)) out.emplace_back(k, v.get());
  return out;
}

}  // namespace mcp::cli
