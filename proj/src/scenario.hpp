#pragma once

#include <memory>
#include <string>

#include "dbar_core.hpp"
#include "types.hpp"

namespace dbar::scenario {

struct RunResult {
  int exit_code = 0;        // 0 pass, 1 tolerance failure, 2 config error, 3 solver failure
  std::string report_json;  // summary record (also written to the output directory)
};

// Runs one subcommand against a JSON config (content, not a path). Report files and
// CSV tables are written under output_dir (created if needed; "" = current directory,
// "-" = do not write files). Never throws: failures are encoded in exit_code.
RunResult run(const std::string& subcommand, const std::string& config_json,
              const std::string& output_dir);

std::string version();

// Direct solve of a scenario's source field (shared by the C API).
struct SolveHandle {
  std::shared_ptr<core::Workspace> ws;
  std::shared_ptr<core::Solution> sol;
};
SolveHandle solve_scenario(const std::string& config_json);  // throws Error

}  // namespace dbar::scenario
