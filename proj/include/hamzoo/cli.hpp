#pragma once

#include <ostream>

namespace hamzoo {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,  // verify: at least one check failed
  kExitUsage = 2,        // bad flags, spec, potential, config or file
  kExitOverflow = 3,     // OverflowRisk
  kExitNumeric = 4,      // step or quadrature failure
};

/// Entry point behind the `hamzoo` binary:
/// eval | integrate | verify | legendre | pascal | sweep.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace hamzoo
