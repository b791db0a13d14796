#ifndef UNISTOCH_SCENARIO_HPP
#define UNISTOCH_SCENARIO_HPP

#include <string>

#include "unistoch/io.hpp"
#include "unistoch/types.hpp"

namespace unistoch::cli {

using io::json;
using io::ScenarioError;

enum ExitCode : int {
  kOk = 0,
  kTaskFailure = 1,   // a verdict-bearing task did not hold
  kParseError = 2,    // malformed input or unresolved reference
  kValidationError = 3,
};

struct RunOptions {
  Tolerance tol = Tolerance{};
  bool parallel = false;
};

// Scenario outcome. `deterministic` is byte-reproducible given the same
// scenario and seed; timing lives outside it.
struct Report {
  json deterministic;
  double elapsed_ms = 0.0;
  bool all_hold = true;

  json to_json() const;
  std::string to_text() const;
};

// Executes the scenario's tasks in order and assembles the report. Throws
// ScenarioError for structural problems and ValidationError (or subclasses)
// for domain failures; a report is returned even when some verdicts fail.
Report run_scenario(const json& scenario, const RunOptions& opts = {});
Report run_scenario_file(const std::string& path, const RunOptions& opts = {});

}  // namespace unistoch::cli

#endif
