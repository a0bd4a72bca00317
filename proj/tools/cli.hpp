#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace zmlt::cli {

/// Runs the command line interface. Diagnostics go to `err` as a single line
/// `zmlt: error: <stage>: <code>: <message>`; the return value is the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zmlt::cli
