#ifndef HSB_RUNNER_HPP
#define HSB_RUNNER_HPP

#include <string>
#include <vector>

#include "hsb/run_config.hpp"

namespace hsb {

/// CLI exit codes. Schema violations are detected before running (exit 2).
enum ExitCode {
  kExitOk = 0,
  kExitConfig = 2,     // schema violation
  kExitEp = 3,         // exceptional point where forbidden; partial results
  kExitNumerical = 4,  // numerical failure
};

struct RunResult {
  int exit_code = kExitOk;
  int n_params = 0;
  std::vector<OutputRecord> records;
};

/// Execute one subcommand: sweep-chi | berry-map | chern | transport | residuals.
/// Results are ordered by grid index regardless of the parallelism degree.
RunResult run_subcommand(const std::string& subcommand, const RunConfig& config);

/// Run and write to config.output_path (overridden by out_override; empty =
/// stdout). Returns the exit code.
int run_and_write(const std::string& subcommand, const RunConfig& config,
                  const std::string& out_override = "");

}  // namespace hsb

#endif
