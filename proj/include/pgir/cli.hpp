#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pgir::cli {

/// Runs one subcommand. `args` excludes the program name. Returns the process
/// exit status; diagnostics go to `err`, structured output to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace pgir::cli
