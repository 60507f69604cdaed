#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "gv/cli/config.hpp"

namespace gv::cli {

/// Process exit statuses.
enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kNoSolution = 2,
  kSolverFailure = 3,
};

struct RunOutcome {
  int exit_code = kOk;
  nlohmann::json manifest;
};

/// Runs one command into cfg.out_dir. A manifest is written in every case;
/// the reason for a nonzero status goes to `err`.
RunOutcome run(const RunConfig& cfg, std::ostream& err);

}  // namespace gv::cli
