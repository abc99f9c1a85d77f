#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace oldauth::cli {

// Exit codes shared by every subcommand.
inline constexpr int exit_ok = 0;
inline constexpr int exit_negative = 1;  // verify mismatch, empty or failed attack
inline constexpr int exit_usage = 2;     // bad flags, unreadable or malformed input

// Runs one command line (args[0] is the program name). Normal output goes to
// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace oldauth::cli
