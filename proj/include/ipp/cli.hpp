#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ipp {

/// Exit codes of the experiment runner.
enum ExitCode : int { kExitOk = 0, kExitPrecondition = 2, kExitAcceptance = 3 };

/// Runs one subcommand (`sample`, `verify`, `cost`, `gxz`, `wobble`, `fdd`,
/// `render`). `args` excludes the program name.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

/// Reads `key=value` lines ('#' comments, blank lines ignored) into
/// `--key=value` tokens.
std::vector<std::string> config_file_tokens(const std::string& path);

}  // namespace ipp
