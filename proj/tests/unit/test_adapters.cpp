#include <fstream>
#include <functional>

#include "doctest.h"

#include "anbx/adapters/classify.hpp"
#include "anbx/adapters/logs.hpp"
#include "anbx/adapters/mock.hpp"
#include "anbx/adapters/pipeline.hpp"
#include "anbx/adapters/plan.hpp"
#include "anbx/adapters/tools.hpp"
#include "anbx/error.hpp"

using namespace anbx::adapters;
namespace fs = std::filesystem;

namespace {

// Any real executable serves as a stand-in tool path for plan building.
const fs::path kExe = ANBX_MOCK_BIN;

std::string error_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const anbx::Error& e) {
    return e.code();
  }
  return "";
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("anbx_adapters_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("ofmc invocations") {
  auto plans = build_ofmc_invocation(kExe, "p.AnB", OfmcOptions{2, false, std::nullopt});
  REQUIRE(plans.size() == 1);
  CHECK(plans[0].args == std::vector<std::string>{"p.AnB", "--numSess", "2"});
  CHECK(plans[0].executable == fs::absolute(kExe));

  plans = build_ofmc_invocation(kExe, "p.AnB", OfmcOptions{1, false, std::nullopt});
  CHECK(plans[0].args == std::vector<std::string>{"p.AnB", "--numSess", "1"});

  plans = build_ofmc_invocation(kExe, "p.AnB", OfmcOptions{1, false, fs::path("eq.thy")});
  CHECK(plans[0].args == std::vector<std::string>{"p.AnB", "--numSess", "1", "--theory", "eq.thy"});

  plans = build_ofmc_invocation(kExe, "dir/p.AnB", OfmcOptions{1, true, std::nullopt});
  REQUIRE(plans.size() == 2);
  CHECK(plans[0].args == std::vector<std::string>{"dir/p.AnB", "--of", "IF"});
  REQUIRE(plans[0].stdout_path);
  CHECK(*plans[0].stdout_path == fs::path("dir/p.if"));
  CHECK(plans[1].args == std::vector<std::string>{"dir/p.if", "--numSess", "1"});

  CHECK(error_code([] { build_ofmc_invocation(kExe, "p.AnB", OfmcOptions{0, false, std::nullopt}); }) == "E-BADN");
  CHECK(error_code([] { build_ofmc_invocation("/nonexistent/ofmc", "p.AnB", {}); }) == "E-CONFIG");
  CHECK(error_code([] { build_ofmc_invocation("", "p.AnB", {}); }) == "E-CONFIG");
  CHECK(error_code([] { build_ofmc_invocation("/tmp", "p.AnB", {}); }) == "E-CONFIG");
  CHECK(error_code([] { build_ofmc_invocation("surely-not-a-tool-xyz", "p.AnB", {}); }) == "E-CONFIG");
  CHECK(resolve_executable("sh").is_absolute());
}

TEST_CASE("proverif and compiler invocations") {
  CHECK(build_proverif_invocation(kExe, "p.pv", ProVerifMode::Pitype).args ==
        std::vector<std::string>{"-in", "pitype", "p.pv"});
  CHECK(build_proverif_invocation(kExe, "p.pv", ProVerifMode::Solve).args == std::vector<std::string>{"p.pv"});
  CHECK(error_code([] { build_proverif_invocation("/missing/proverif", "p.pv", ProVerifMode::Solve); }) == "E-CONFIG");
  CHECK(build_anbxc_invocation(kExe, "p.AnBx", ExportTarget::AnB).args == std::vector<std::string>{"p.AnBx", "-out:AnB"});
  ToolFlags custom;
  custom.ofmc_sessions = "-n";
  CHECK(build_ofmc_invocation(kExe, "p.AnB", OfmcOptions{3, false, std::nullopt}, custom)[0].args ==
        std::vector<std::string>{"p.AnB", "-n", "3"});
}

TEST_CASE("one-session-first pipeline") {
  auto p = plan_one_session_first(kExe, "dir/NSPK.AnB", 3, "NSPK");
  CHECK(pipeline_size(p) == 2);
  CHECK(p.task.kind == TaskKind::OfmcOneSession);
  CHECK(p.task.sessions == 1);
  CHECK(p.task.plan.args == std::vector<std::string>{"dir/NSPK.AnB", "--numSess", "1"});
  REQUIRE(p.then.size() == 1);
  CHECK(p.then[0].condition == Condition::OnSafe);
  CHECK(p.then[0].task.kind == TaskKind::OfmcMultiSession);
  CHECK(p.then[0].task.sessions == 3);
  CHECK(p.then[0].task.plan.args == std::vector<std::string>{"dir/NSPK.AnB", "--numSess", "3"});
  CHECK(error_code([] { plan_one_session_first(kExe, "p.AnB", 1, "p"); }) == "E-BADN");

  CHECK(condition_holds(Condition::OnSafe, Outcome::Safe, 0));
  CHECK_FALSE(condition_holds(Condition::OnSafe, Outcome::Attack, 0));
  CHECK_FALSE(condition_holds(Condition::OnSafe, Outcome::Inconclusive, 0));
  CHECK(condition_holds(Condition::OnAttack, Outcome::Attack, 0));
  CHECK_FALSE(condition_holds(Condition::OnSuccessExit, Outcome::Safe, 1));
}

TEST_CASE("attack reconstruction pipeline") {
  auto p = plan_attack_reconstruction(kExe, kExe, "dir/Fresh.AnBx");
  CHECK(pipeline_size(p) == 3);
  CHECK(p.task.tool == Tool::Anbxc);
  CHECK(p.task.plan.args == std::vector<std::string>{"dir/Fresh.AnBx", "-out:AnB"});
  const auto& ofmc = p.then.at(0);
  CHECK(ofmc.condition == Condition::OnSuccessExit);
  CHECK(ofmc.task.plan.args.at(0) == "dir/Fresh.AnB");
  const auto& trace = ofmc.then.at(0);
  CHECK(trace.condition == Condition::OnAttack);
  CHECK(trace.feed_previous_output);
  CHECK(trace.task.tool == Tool::Anbxc);
  CHECK(error_code([] { plan_attack_reconstruction("/missing/anbxc", kExe, "p.AnBx"); }) == "E-CONFIG");
  CHECK(error_code([] { plan_attack_reconstruction(kExe, "/missing/ofmc", "p.AnBx"); }) == "E-CONFIG");
}

TEST_CASE("docker plan golden") {
  auto plans = docker_run_plan("a.yml", "b.yml");
  REQUIRE(plans.size() == 4);
  const std::string golden =
      R"({"executable":"docker","args":["compose","-f","a.yml","down"],"workingDir":"","env":{},"stdinData":null})" "\n"
      R"({"executable":"docker","args":["container","prune","--force"],"workingDir":"","env":{},"stdinData":null})" "\n"
      R"({"executable":"docker","args":["network","prune","--force"],"workingDir":"","env":{},"stdinData":null})" "\n"
      R"({"executable":"docker","args":["compose","-f","b.yml","up"],"workingDir":"","env":{},"stdinData":null})" "\n";
  CHECK(encode_plans(plans) == golden);
  CHECK(decode_plans(golden) == plans);

  auto same = docker_run_plan("a.yml", "a.yml");
  CHECK(same.size() == 4);
  CHECK(same[0].args[2] == "a.yml");
  CHECK(same[3].args[2] == "a.yml");
}

TEST_CASE("plan encoding round trip") {
  CommandPlan p{"/bin/tool", {"a b", "\"q\"", "ü"}, "/w", {{"K", "V"}, {"A", "1"}}, std::string("in\n\x01"), fs::path("/o")};
  CHECK(decode_plan(encode_plan(p)) == p);
  CHECK(p.command_line() == "/bin/tool a b \"q\" ü");
  CHECK(error_code([] { decode_plan("{not json"); }) == "E-PLAN");
}

TEST_CASE("ofmc output classes") {
  auto c = classify_output(Tool::Ofmc, "INPUT:\n   NSPK_goal3.AnB\nSUMMARY:\n  ATTACK_FOUND\n", 0);
  CHECK(c.outcome == Outcome::Attack);
  CHECK(c.goal_name == "g3");
  CHECK(c.excerpt == "  ATTACK_FOUND");
  CHECK(classify_output(Tool::Ofmc, "SUMMARY:\n  NO_ATTACK_FOUND\n", 0).outcome == Outcome::Safe);
  CHECK(classify_output(Tool::Ofmc, "SUMMARY:\n  INCONCLUSIVE\n", 0).outcome == Outcome::Inconclusive);
  CHECK(classify_output(Tool::Ofmc, "garbage", 1).outcome == Outcome::ToolError);
  CHECK(classify_output(Tool::Ofmc, "nothing here", 0).outcome == Outcome::Inconclusive);
  CHECK(classify_output(Tool::Ofmc, "ERROR: parse failure", 0).outcome == Outcome::ToolError);
  CHECK_FALSE(classify_output(Tool::Ofmc, "SUMMARY:\n  NO_ATTACK_FOUND\n", 0).goal_name);
  CHECK(classify_output(Tool::Ofmc, "NO_ATTACK_FOUND", 0, default_rules(), "dir/X_goal12.AnB").goal_name == "g12");
}

TEST_CASE("proverif output classes") {
  CHECK(classify_output(Tool::ProVerif, "RESULT not attacker(k[]) is true.\n", 0).outcome == Outcome::Safe);
  CHECK(classify_output(Tool::ProVerif, "RESULT not attacker(k[]) is true.\nRESULT inj-event(e) is false.\n", 0)
            .outcome == Outcome::Attack);
  CHECK(classify_output(Tool::ProVerif, "RESULT event(e) ==> event(f) cannot be proved.\n", 0).outcome ==
        Outcome::Inconclusive);
  CHECK(classify_output(Tool::ProVerif, "File \"x.pv\", line 3, character 1:\nError: Syntax error\n", 1).outcome ==
        Outcome::ToolError);
}

TEST_CASE("compiler output classes") {
  CHECK(classify_output(Tool::Anbxc, "done\n", 0).outcome == Outcome::Safe);
  CHECK(classify_output(Tool::Anbxc, "Exception in thread main\n", 1).outcome == Outcome::ToolError);
  CHECK(classify_output(Tool::Anbxc, "", 3).outcome == Outcome::ToolError);
}

TEST_CASE("rule files override defaults") {
  auto book = load_rules("# custom\n[ofmc]\nzero-exit = Safe\nAttack = ^BROKEN$\n");
  CHECK(classify_output(Tool::Ofmc, "BROKEN", 0, book).outcome == Outcome::Attack);
  CHECK(classify_output(Tool::Ofmc, "ATTACK_FOUND", 0, book).outcome == Outcome::Safe);
  CHECK(classify_output(Tool::ProVerif, "RESULT x is false.", 0, book).outcome == Outcome::Attack);
  CHECK(error_code([] { load_rules("[ofmc]\nAttack = (\n"); }) == "E-CONFIG");
  CHECK(error_code([] { load_rules("Attack = x\n"); }) == "E-CONFIG");
  CHECK(error_code([] { load_rules("[nosuchtool]\n"); }) == "E-CONFIG");
  CHECK(error_code([] { load_rules("[ofmc]\nSometimes = x\n"); }) == "E-CONFIG");
  CHECK(classify_line(Tool::Ofmc, "  ATTACK_FOUND") == Outcome::Attack);
  CHECK_FALSE(classify_line(Tool::Ofmc, "STATISTICS:"));
}

TEST_CASE("mock output classifies back to the scripted class") {
  for (Tool tool : {Tool::Ofmc, Tool::ProVerif}) {
    for (Outcome o : {Outcome::Safe, Outcome::Attack, Outcome::Inconclusive, Outcome::ToolError}) {
      MockScript s;
      s.tool = tool;
      s.outcome = o;
      auto run = run_mock_verifier(s, "P.AnB");
      CAPTURE(to_string(tool));
      CAPTURE(to_string(o));
      CHECK(classify_output(tool, run.output, run.exit_code).outcome == o);
    }
  }
  auto s = MockScript::parse("delay_ms = 200\nclass = Attack\ngoal = g2\n");
  auto run = run_mock_verifier(s, "mock", std::nullopt, false);
  CHECK(run.delay_ms == 200);
  auto c = classify_output(Tool::Ofmc, run.output, run.exit_code);
  CHECK(c.outcome == Outcome::Attack);
  CHECK(c.goal_name == "g2");
}

TEST_CASE("mock per-goal scripts") {
  auto s = MockScript::parse("class = Safe\ndelay_ms = 10\nall_delay_ms = 60\ngoal.g2 = Attack\n");
  auto g1 = plan_mock_run(s, "dir/T_goal1.AnB");
  auto g2 = plan_mock_run(s, "dir/T_goal2.AnB");
  auto all = plan_mock_run(s, "dir/T.AnB");
  CHECK(g1.outcome == Outcome::Safe);
  CHECK(g2.outcome == Outcome::Attack);
  CHECK(all.outcome == Outcome::Attack);
  CHECK(all.delay_ms == 60);
  CHECK(g1.delay_ms == 10);
  CHECK(classify_output(Tool::Ofmc, g2.output, g2.exit_code).goal_name == "g2");
  CHECK_FALSE(classify_output(Tool::Ofmc, all.output, all.exit_code).goal_name);
  CHECK(MockScript::parse(s.serialize()).serialize() == s.serialize());
  CHECK(error_code([] { MockScript::parse("colour = red\n"); }) == "E-CONFIG");
  CHECK(error_code([] { MockScript::parse("class = Timeout\n"); }) == "E-CONFIG");
  CHECK(error_code([] { MockScript::parse("delay_ms = soon\n"); }) == "E-CONFIG");
}

TEST_CASE("log file naming") {
  Timestamp ts{2025, 1, 1, 12, 0, 0};
  CHECK(format_log_path("logs", "ofmc", "NSPK", std::nullopt, ts) == fs::path("logs/ofmc/NSPK_20250101-120000.log"));
  CHECK(format_log_path("logs", "anbxc", "Fresh", std::string("AnB"), ts) ==
        fs::path("logs/anbxc/Fresh_AnB_20250101-120000.log"));

  auto root = scratch("logs");
  auto a = log_path(root, "ofmc", "NSPK", std::nullopt, ts);
  auto b = log_path(root, "ofmc", "NSPK", std::nullopt, ts);
  auto c = log_path(root, "ofmc", "NSPK", std::nullopt, ts);
  CHECK(a == root / "ofmc/NSPK_20250101-120000.log");
  CHECK(b == root / "ofmc/NSPK_20250101-120000-2.log");
  CHECK(c == root / "ofmc/NSPK_20250101-120000-3.log");
  CHECK(fs::exists(a));

  std::ofstream(root / "plainfile") << "x";
  CHECK(error_code([&] { log_path(root / "plainfile", "ofmc", "NSPK", std::nullopt, ts); }) == "E-IO");
  fs::remove_all(root);

  auto header = log_header("ofmc p.AnB --numSess 1", ts, "");
  CHECK(header == "command: ofmc p.AnB --numSess 1\nstarted: 2025-01-01 12:00:00\nversion: unknown\n");
}
