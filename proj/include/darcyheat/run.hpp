#pragma once

#include <vector>

#include "darcyheat/adapt.hpp"
#include "darcyheat/config.hpp"

namespace darcyheat {

struct RunOutcome {
  std::vector<AdaptiveRecord> records;
  double slope = 0.0;  // fitted decay slope of est_total over the last records
  bool stagnated = false;
  std::string csv_path;
};

// Executes one configured adaptive run: writes config.resolved and
// convergence.csv under config.out, plus per-iteration VTK files when
// enabled. Throws on configuration, domain, or solver failures.
RunOutcome execute_run(const RunConfig& config);

// CSV serialization used for convergence.csv (deterministic, shortest
// round-trip number formatting).
std::string records_to_csv(const std::vector<AdaptiveRecord>& records);

// Command-line entry point; args excludes the program name. Returns the
// process exit code.
int run_cli(const std::vector<std::string>& args);

}  // namespace darcyheat
