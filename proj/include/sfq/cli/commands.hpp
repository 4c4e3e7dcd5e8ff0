#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sfq::cli {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,       // unexpected runtime failure
  kExitConfigError = 2,   // invalid parameters, paths or input files
  kExitBudgetExhausted = 3,
};

/// Runs the `sfqctl` command line. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Version string embedded in run.meta.
std::string version_string();

}  // namespace sfq::cli
