#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tracereg {

/// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNotConverged = 2;
inline constexpr int kExitIo = 3;

/// Runs `tracereg <subcommand> ...`; args[0] is the program name.
/// Subcommands: gen, solve, sweep, export-cone, bench.
int cli_main(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace tracereg
