#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "nhtopo/models.hpp"

namespace nhtopo::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kNumerical = 3, kIo = 4 };

/// Runs one command line (without the program name). Machine output goes to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses `lattice-main:m=2`, `lattice-supp:m=0.25`, `kp:alpha=1.2`, `kp-base`
/// or `grid:<file>`.
BlochModel parse_model(const std::string& spec);

}  // namespace nhtopo::cli
