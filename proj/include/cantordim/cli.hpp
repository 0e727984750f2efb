#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cantordim {

/// Process exit codes of the `cantordim` tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitParseError = 1,
  kExitInfeasible = 2,
  kExitNotConverged = 3,
};

/// Runs `cantordim dim|verify|sample|expand --instance FILE [--n N]
/// [--seed S] [--x X] [--out FILE]`. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cantordim
