#pragma once

#include <string>

namespace darcyheat {

// Effective parameters of one adaptive run. Serialized to / parsed from a
// flat key-value text file; CLI flags override file entries.
struct RunConfig {
  std::string problem = "example1";
  std::string mesh_file;  // optional custom initial mesh (text format)
  double p = 1.6;
  int iters = 10;
  int quad_degree = 19;
  double tol = 1e-8;
  int max_picard = 200;
  double mark_factor = 0.5;
  std::string out = ".";
  bool vtk = false;
  int cells = 4;  // subdivisions across the domain bounding box
  unsigned long seed = 0;  // reserved for future use, echoed for reproducibility
};

RunConfig load_config_file(const std::string& path);

// Applies one key=value pair; throws ConfigError for unknown keys or
// malformed values.
void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value);

// Throws ConfigError listing all violations.
void validate_config(const RunConfig& config);

// Round-trip-exact serialization (shortest representation for doubles).
std::string serialize_config(const RunConfig& config);

std::string format_double(double value);

}  // namespace darcyheat
