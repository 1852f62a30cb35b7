#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace klooster::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_counterexample = 1,
    exit_usage = 2,
};

/// Runs the klooster command line. Records go to `out` (or to --output), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace klooster::cli
