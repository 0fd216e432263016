#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "anbx/adapters/classify.hpp"

namespace anbx::adapters {

/// Test double for OFMC and ProVerif, configured by a key-value file:
///
///   tool = ofmc            # or proverif: selects the output dialect
///   class = Safe           # default outcome
///   delay_ms = 200         # sleep before answering
///   all_delay_ms = 1200    # sleep for an all-goals run (default: delay_ms)
///   goal = g2              # goal to report when the input names none
///   goal.g2 = Attack       # outcome for one goal
///   exit_code = 0          # override the exit status
///   ignore_term = 1        # ignore SIGTERM (binary only)
///
/// A run is single-goal when the input is named "<p>_goal<i>", a goal is
/// given explicitly, or the script names one. An all-goals run reports the
/// worst per-goal outcome (Attack, ToolError, Inconclusive, Safe).
struct MockScript {
  Tool tool = Tool::Ofmc;
  Outcome outcome = Outcome::Safe;
  int delay_ms = 0;
  std::optional<int> all_delay_ms;
  std::optional<std::string> goal;
  std::map<std::string, Outcome> per_goal;
  std::optional<int> exit_code;
  bool ignore_term = false;

  /// Throws anbx::Error E-CONFIG on unknown keys or values.
  static MockScript parse(const std::string& text);
  static MockScript load(const std::filesystem::path& path);
  std::string serialize() const;
};

struct MockRun {
  std::string output;
  int exit_code = 0;
  int delay_ms = 0;
  Outcome outcome = Outcome::Safe;
  std::optional<std::string> goal;
};

/// What the mock answers for `input` (a protocol path or name).
MockRun plan_mock_run(const MockScript& script, const std::string& input,
                      const std::optional<std::string>& goal_override = std::nullopt);

/// A verifier-style command line as the mock reads it. The protocol is the
/// first argument that is neither a flag nor a flag's value; any argument
/// starting with '-' takes the following non-flag argument as its value.
/// Recognised flags: --script PATH, --goal G, --class C, --delay-ms N.
struct MockArgs {
  std::string input = "mock";
  std::optional<std::filesystem::path> script;
  std::optional<std::string> goal;
  std::optional<Outcome> outcome;
  std::optional<int> delay_ms;
};

/// Throws anbx::Error E-CONFIG on a bad --class or --delay-ms value.
MockArgs parse_mock_args(const std::vector<std::string>& args);

/// The script with the command-line overrides applied: --class fixes the
/// outcome for every goal, --delay-ms fixes both delays.
MockScript apply_mock_args(MockScript script, const MockArgs& args);

/// plan_mock_run, then sleeps for the run's delay unless `sleep` is false.
MockRun run_mock_verifier(const MockScript& script, const std::string& input = "mock",
                          const std::optional<std::string>& goal_override = std::nullopt, bool sleep = true);

}  // namespace anbx::adapters
