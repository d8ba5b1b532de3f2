#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vidmetrics {

/// Runs one command line (args excludes the program name). Returns 0 on
/// success, 1 on usage errors, 2 on data or format errors; diagnostics go
/// to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vidmetrics
