#pragma once

#include <string>
#include <vector>

#include "presslab/config.hpp"

namespace presslab {

struct RunResult {
  int exit_code = 0;  // 0 ok, 1 asserted invariant failed, 2 config error
  std::vector<std::string> files;
};

// Executes one configured command: writes the run manifest, the result tables
// (CSV + JSON) and certificates into the output directory, and reports the
// exit status. Rerunning the same resolved config reproduces the result
// tables byte for byte.
RunResult run(const RunConfig& config);

}  // namespace presslab
