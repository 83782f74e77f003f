#pragma once

#include <string>
#include <vector>

namespace sonde::cli {

/// Exit codes shared by every subcommand.
enum ExitCode {
  kOk = 0,
  kFailure = 1,           // unexpected internal error
  kConfigError = 2,       // bad config, bad flags, malformed input files
  kConditionError = 3,    // required conditions fail
  kUndecidedError = 4,    // condition checks came back undecided
  kEstimatorError = 5,    // estimator did not produce a usable result
};

/// Runs the command line given argv-style arguments (without the program
/// name). All output goes to stdout/stderr; returns the exit code.
int run_cli(const std::vector<std::string>& args);

}  // namespace sonde::cli
