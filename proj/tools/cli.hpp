#ifndef PICKDROP_TOOLS_CLI_HPP_
#define PICKDROP_TOOLS_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

#include "pickdrop/error.hpp"

namespace pickdrop::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,  // a verification or soundness check did not hold
  kExitUsage = 2,
  kExitIo = 3,
  kExitFormat = 4,
  kExitGuard = 5,
};

int exit_code(ErrorKind kind) noexcept;

// Runs one command line, program name excluded, e.g. {"verify", "pairs"}.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pickdrop::cli

#endif  // PICKDROP_TOOLS_CLI_HPP_
