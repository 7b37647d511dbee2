#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace finsub::cli {

/// Runs the command line `args` (args[0] is the program name). Reports go to
/// `out` (or the --out file), diagnostics to `err`.
/// Exit codes: 0 success or CONSISTENT, 1 failure or VIOLATION, 2 usage or
/// schema error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace finsub::cli
