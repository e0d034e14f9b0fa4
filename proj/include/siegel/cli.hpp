#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace siegel::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDomain = 2, kVerificationFailed = 3 };

/// Runs one subcommand; argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace siegel::cli
