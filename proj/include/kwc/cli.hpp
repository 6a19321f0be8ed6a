#pragma once

#include <iosfwd>

namespace kwc {

// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitAuditFailure = 1;
inline constexpr int kExitConfigError = 2;

/// Entry point of the `kwc` tool: subcommands run, audit, gamma, refine, validate.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kwc
