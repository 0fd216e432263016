#include "anbx/adapters/pipeline.hpp"

#include "anbx/error.hpp"

namespace anbx::adapters {

namespace fs = std::filesystem;

std::string to_string(TaskKind k) {
  switch (k) {
    case TaskKind::Compile: return "Compile";
    case TaskKind::OfmcOneSession: return "OfmcOneSession";
    case TaskKind::ProVerif: return "ProVerif";
    case TaskKind::OfmcMultiSession: return "OfmcMultiSession";
    case TaskKind::Generic: return "Generic";
  }
  return "Generic";
}

std::string to_string(Condition c) {
  switch (c) {
    case Condition::Always: return "always";
    case Condition::OnSafe: return "on-safe";
    case Condition::OnAttack: return "on-attack";
    case Condition::OnSuccessExit: return "on-success";
  }
  return "always";
}

bool condition_holds(Condition c, Outcome outcome, int exit_code) {
  switch (c) {
    case Condition::Always: return true;
    case Condition::OnSafe: return outcome == Outcome::Safe;
    case Condition::OnAttack: return outcome == Outcome::Attack;
    case Condition::OnSuccessExit: return exit_code == 0 && outcome != Outcome::ToolError && outcome != Outcome::Timeout;
  }
  return false;
}

ConditionalPipeline plan_one_session_first(const fs::path& ofmc, const fs::path& protocol, int n,
                                           const std::string& protocol_name, const ToolFlags& flags) {
  if (n < 2) throw Error("E-BADN", "one-session-first needs a session bound of at least 2, got " + std::to_string(n));
  auto first = build_ofmc_invocation(ofmc, protocol, OfmcOptions{1, false, std::nullopt}, flags);
  auto second = build_ofmc_invocation(ofmc, protocol, OfmcOptions{n, false, std::nullopt}, flags);
  auto goal = goal_label_from_name(protocol.filename().string());

  PipelineStep root;
  root.task = TaskSpec{TaskKind::OfmcOneSession, Tool::Ofmc, first.at(0), protocol_name, goal, 1, std::nullopt};
  PipelineStep cont;
  cont.task = TaskSpec{TaskKind::OfmcMultiSession, Tool::Ofmc, second.at(0), protocol_name, goal, n, std::nullopt};
  cont.condition = Condition::OnSafe;
  root.then.push_back(std::move(cont));
  return root;
}

ConditionalPipeline plan_attack_reconstruction(const fs::path& anbxc, const fs::path& ofmc,
                                               const fs::path& anbx_protocol, const ToolFlags& flags) {
  CommandPlan exported = build_anbxc_invocation(anbxc, anbx_protocol, ExportTarget::AnB, flags);
  fs::path anb = anbx_protocol;
  anb.replace_extension(".AnB");
  auto verify = build_ofmc_invocation(ofmc, anb, OfmcOptions{}, flags);
  CommandPlan interpret = exported;
  interpret.args = {anbx_protocol.string(), flags.anbxc_attack_trace};

  std::string name = anbx_protocol.stem().string();
  PipelineStep root;
  root.task = TaskSpec{TaskKind::Compile, Tool::Anbxc, exported, name, std::nullopt, std::nullopt, "AnB"};
  PipelineStep step2;
  step2.task = TaskSpec{TaskKind::OfmcOneSession, Tool::Ofmc, verify.at(0), name, std::nullopt, 1, std::nullopt};
  step2.condition = Condition::OnSuccessExit;
  PipelineStep step3;
  step3.task = TaskSpec{TaskKind::Compile, Tool::Anbxc, interpret, name, std::nullopt, std::nullopt, "trace"};
  step3.condition = Condition::OnAttack;
  step3.feed_previous_output = true;
  step2.then.push_back(std::move(step3));
  root.then.push_back(std::move(step2));
  return root;
}

std::size_t pipeline_size(const PipelineStep& root) {
  std::size_t n = 1;
  for (const auto& c : root.then) n += pipeline_size(c);
  return n;
}

}  // namespace anbx::adapters
