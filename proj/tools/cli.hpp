#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace escape_lab::cli {

enum ExitCode : int { kOk = 0, kValidationError = 1, kResourceError = 2 };

/// Runs one subcommand. Data goes to `out`, diagnostics and warnings to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int dispatch(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace escape_lab::cli
