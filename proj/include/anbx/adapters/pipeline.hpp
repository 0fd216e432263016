#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "anbx/adapters/classify.hpp"
#include "anbx/adapters/plan.hpp"
#include "anbx/adapters/tools.hpp"

namespace anbx::adapters {

enum class TaskKind { Compile, OfmcOneSession, ProVerif, OfmcMultiSession, Generic };

std::string to_string(TaskKind k);

/// Everything needed to run and label one task.
struct TaskSpec {
  TaskKind kind = TaskKind::Generic;
  Tool tool = Tool::Generic;
  CommandPlan plan;
  /// Protocol the result belongs to (file stem without any _goal suffix).
  std::string protocol;
  /// "g<i>" for single-goal runs; empty for all-goals runs.
  std::optional<std::string> goal;
  std::optional<int> sessions;
  std::optional<std::string> export_option;
};

enum class Condition { Always, OnSafe, OnAttack, OnSuccessExit };

std::string to_string(Condition c);

/// Whether a continuation guarded by `c` runs after a parent that ended
/// with `outcome` and `exit_code`.
bool condition_holds(Condition c, Outcome outcome, int exit_code);

/// A task plus the continuations submitted once it finishes. A
/// continuation's condition is evaluated against its parent's result;
/// with feed_previous_output the parent's captured stdout becomes its stdin.
struct PipelineStep {
  TaskSpec task;
  Condition condition = Condition::Always;
  bool feed_previous_output = false;
  std::vector<PipelineStep> then;
};

using ConditionalPipeline = PipelineStep;

/// OFMC with one session; OFMC with n sessions only if that was Safe.
/// Errors: E-BADN (n < 2), E-CONFIG.
ConditionalPipeline plan_one_session_first(const std::filesystem::path& ofmc, const std::filesystem::path& protocol,
                                           int n, const std::string& protocol_name, const ToolFlags& flags = {});

/// Export the AnBx protocol to AnB, verify it with OFMC, and only on Attack
/// call the compiler again with the OFMC output on its stdin. The export is
/// expected next to the source as "<stem>.AnB".
/// Errors: E-CONFIG for either executable, before any step runs.
ConditionalPipeline plan_attack_reconstruction(const std::filesystem::path& anbxc, const std::filesystem::path& ofmc,
                                               const std::filesystem::path& anbx_protocol,
                                               const ToolFlags& flags = {});

/// Number of steps in the tree.
std::size_t pipeline_size(const PipelineStep& root);

}  // namespace anbx::adapters
