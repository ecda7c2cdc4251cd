#pragma once

#include "gwa/config.hpp"

#include <iosfwd>

namespace gwa {

enum ExitCode : int { kExitOk = 0, kExitFail = 1, kExitConfig = 2 };

/// Executes a validated configuration, writing artifacts under config.output_dir
/// and a short human summary to `out`. Errors go to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace gwa
