#include "darcyheat/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "darcyheat/errors.hpp"

namespace darcyheat {

std::string format_double(double value) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse '" + value + "' as a number");
  }
}

long parse_long(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse '" + value + "' as an integer");
  }
}

}  // namespace

void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value) {
  if (key == "problem")
    config.problem = value;
  else if (key == "mesh")
    config.mesh_file = value;
  else if (key == "p")
    config.p = parse_double(key, value);
  else if (key == "iters")
    config.iters = static_cast<int>(parse_long(key, value));
  else if (key == "quad_degree")
    config.quad_degree = static_cast<int>(parse_long(key, value));
  else if (key == "tol")
    config.tol = parse_double(key, value);
  else if (key == "max_picard")
    config.max_picard = static_cast<int>(parse_long(key, value));
  else if (key == "mark_factor")
    config.mark_factor = parse_double(key, value);
  else if (key == "out")
    config.out = value;
  else if (key == "vtk") {
    if (value == "on")
      config.vtk = true;
    else if (value == "off")
      config.vtk = false;
    else
      throw ConfigError("config key 'vtk' takes 'on' or 'off', got '" + value + "'");
  } else if (key == "cells")
    config.cells = static_cast<int>(parse_long(key, value));
  else if (key == "seed")
    config.seed = static_cast<unsigned long>(parse_long(key, value));
  else
    throw ConfigError("unknown config key '" + key + "'");
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  RunConfig config;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    apply_config_entry(config, trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }
  return config;
}

void validate_config(const RunConfig& config) {
  std::vector<std::string> violations;
  if (!(config.p > 1.0 && config.p < 2.0))
    violations.push_back("p must lie in (1, 2), got " + format_double(config.p));
  if (config.iters < 1) violations.push_back("iters must be >= 1");
  if (config.quad_degree < 1 || config.quad_degree > 20)
    violations.push_back("quad_degree must lie in [1, 20]");
  if (!(config.tol > 0.0)) violations.push_back("tol must be positive");
  if (config.max_picard < 1) violations.push_back("max_picard must be >= 1");
  if (!(config.mark_factor > 0.0 && config.mark_factor < 1.0))
    violations.push_back("mark_factor must lie in (0, 1)");
  if (config.cells < 1) violations.push_back("cells must be >= 1");
  if (!violations.empty()) {
    std::ostringstream oss;
    oss << "invalid configuration:";
    for (const auto& v : violations) oss << "\n  - " << v;
    throw ConfigError(oss.str());
  }
}

std::string serialize_config(const RunConfig& config) {
  std::ostringstream oss;
  oss << "problem = " << config.problem << '\n';
  if (!config.mesh_file.empty()) oss << "mesh = " << config.mesh_file << '\n';
  oss << "p = " << format_double(config.p) << '\n';
  oss << "iters = " << config.iters << '\n';
  oss << "quad_degree = " << config.quad_degree << '\n';
  oss << "tol = " << format_double(config.tol) << '\n';
  oss << "max_picard = " << config.max_picard << '\n';
  oss << "mark_factor = " << format_double(config.mark_factor) << '\n';
  oss << "out = " << config.out << '\n';
  oss << "vtk = " << (config.vtk ? "on" : "off") << '\n';
  oss << "cells = " << config.cells << '\n';
  oss << "seed = " << config.seed << '\n';
  return oss.str();
}

}  // namespace darcyheat
