#pragma once

#include <ostream>

namespace thinfilm {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitValidation = 2,
  kExitSolver = 3,
  kExitPrecondition = 4,
};

// Subcommands: run, sweep, fsp, audit, regime, lemma.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace thinfilm
