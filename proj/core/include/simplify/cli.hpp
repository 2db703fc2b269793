#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace simplify {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Entry point of the `simplify` tool. `args` excludes the program name.
// Subcommands: decode, eval, score, loss, judge-prompt, judge. A `--config`
// file of `key = value` lines is applied after the command-line flags, so its
// values take precedence.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace simplify
