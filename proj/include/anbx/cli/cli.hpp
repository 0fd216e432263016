#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "anbx/scheduler/events.hpp"

namespace anbx::cli {

/// Process exit status of every subcommand.
enum ExitCode : int {
  kExitOk = 0,        ///< success, all goals Safe
  kExitFindings = 1,  ///< diagnostics, Attack, or not proved safe
  kExitToolError = 2, ///< tool, configuration or usage error
  kExitTimeout = 3,   ///< a verification timed out
};

struct CliEnv {
  /// Whether `out` is a terminal; colours need this and consoleColors.
  bool terminal = false;
};

/// Runs one anbxw command line (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const CliEnv& env = {});

/// ANSI-coloured copy of a console chunk: Attack red, Safe green,
/// Inconclusive and Timeout orange.
std::string colorize(const std::string& text, const std::vector<scheduler::SpanHint>& hints);

/// The stub protocol written by "init".
std::string stub_protocol(const std::string& name);

}  // namespace anbx::cli
