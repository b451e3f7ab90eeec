#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dpg::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kRuntime = 2, kVerdictFail = 3 };

/// Parses argv and runs one subcommand. Messages go to `out` and `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace dpg::cli
