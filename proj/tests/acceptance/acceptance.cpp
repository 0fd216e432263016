// Acceptance suite: one PASS/FAIL/SKIP line per criterion.
//
// Usage: anbx-acceptance [--fuzz-seconds N] [--only NAME]
// The fuzz budget defaults to 600 s; ANBX_FUZZ_SECONDS overrides it too.

#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "anbx/adapters/pipeline.hpp"
#include "anbx/adapters/plan.hpp"
#include "anbx/adapters/tools.hpp"
#include "anbx/error.hpp"
#include "anbx/results/bench.hpp"
#include "anbx/scheduler/scheduler.hpp"
#include "anbx/semantics/validate.hpp"
#include "anbx/service/config.hpp"
#include "anbx/service/workbench.hpp"
#include "anbx/syntax/parser.hpp"
#include "anbx/syntax/printer.hpp"
#include "anbx/transform/lowering.hpp"

namespace fs = std::filesystem;
using namespace std::chrono_literals;
using namespace anbx;
using adapters::Outcome;
using adapters::TaskKind;
using scheduler::TaskState;

namespace {

const fs::path kFixtures = ANBX_FIXTURES;
const fs::path kMock = ANBX_MOCK_BIN;

struct Verdict {
  enum Kind { Pass, Fail, Skip } kind = Pass;
  std::string detail;
  /// Failures that are fully explained by known-unattainable cases.
  bool known = false;
};

struct Criterion {
  std::string name;
  double limit_seconds;  ///< 0: no runtime limit
  std::function<Verdict()> run;
};

/// Collects failed checks for one criterion.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    ++total_;
    if (!ok) failures_.push_back(what);
  }
  int total() const { return total_; }
  bool ok() const { return failures_.empty(); }
  Verdict verdict(const std::string& summary) const {
    if (ok()) return {Verdict::Pass, summary};
    std::string d = summary + "; failed: " + failures_.front();
    if (failures_.size() > 1) d += " (+" + std::to_string(failures_.size() - 1) + " more)";
    return {Verdict::Fail, d};
  }

 private:
  int total_ = 0;
  std::vector<std::string> failures_;
};

syntax::SourceFile load_source(const std::string& name) { return syntax::SourceFile::load(kFixtures / name); }

syntax::ProtocolModel load_model(const std::string& name) {
  auto r = syntax::parse(load_source(name));
  if (!r.model) throw std::runtime_error(name + " does not parse");
  return *r.model;
}

std::size_t count_code(const std::vector<syntax::Diagnostic>& diags, const std::string& code) {
  return static_cast<std::size_t>(
      std::count_if(diags.begin(), diags.end(), [&](const syntax::Diagnostic& d) { return d.code == code; }));
}

std::vector<fs::path> corpus() {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(kFixtures))
    if (e.path().extension() == ".AnB" || e.path().extension() == ".AnBx") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

struct TempDir {
  fs::path path;
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "anbx-accept-XXXXXX").string();
    path = ::mkdtemp(tmpl.data());
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

adapters::TaskSpec mock_spec(TaskKind kind, const std::string& input, int delay_ms, const std::string& cls) {
  adapters::TaskSpec s;
  s.kind = kind;
  s.tool = adapters::Tool::Ofmc;
  s.plan = adapters::CommandPlan{kMock, {input, "--delay-ms", std::to_string(delay_ms), "--class", cls}, {}, {}, {}, {}};
  s.protocol = input;
  return s;
}

// ---------------------------------------------------------------------------

Verdict delta_arithmetic() {
  struct Row {
    const char* protocol;
    const char* tool;
    double all, sgl, printed;
  };
  const Row rows[] = {
      {"Carlsen", "OFMC", 5.64, 6.07, 7.62},
      {"Carlsen", "ProVerif", 0.090, 0.032, -64.44},
      {"H530", "OFMC", 16.05, 19.14, 19.25},
      {"H530", "ProVerif", 0.257, 0.081, -68.48},
      {"IKEv2DS", "OFMC", 32.86, 34.78, 5.84},
      {"IKEv2DS", "ProVerif", 2.774, 0.980, -64.67},
      {"ISO5Pass", "OFMC", 1.22, 23.25, 1805.74},
      {"ISO5Pass", "ProVerif", 0.337, 0.093, -72.40},
      {"ISOCCF3PassMutual", "OFMC", 3.47, 4.19, 20.75},
      {"ISOCCF3PassMutual", "ProVerif", 0.042, 0.021, -50.00},
      {"NSL", "OFMC", 0.78, 0.81, 3.85},
      {"NSL", "ProVerif", 0.062, 0.028, -54.84},
      {"NSPK", "OFMC", 0.32, 0.88, 175.00},
      {"NSPK", "ProVerif", 0.077, 0.027, -64.94},
      {"Otway-Rees", "OFMC", 16.78, 17.38, 3.58},
      {"Otway-Rees", "ProVerif", 0.116, 0.038, -64.24},
      {"TLS", "OFMC", 70.24, 68.69, -2.21},
      {"TLS", "ProVerif", 0.504, 0.068, -85.51},
      {"Woo-Lam 92", "OFMC", 266.57, 325.21, 22.00},
      {"Woo-Lam 92", "ProVerif", 8.329, 2.401, -71.17},
      {"Yahalom", "OFMC", 2.38, 4.28, 79.83},
      {"Yahalom", "ProVerif", 0.131, 0.030, -77.10},
  };
  constexpr double kTolerance = 0.01;
  // Printed values that disagree with their own all/sgl columns by a full
  // 3.00 and 1.00 points; no rounding of the inputs reaches them.
  const std::set<std::string> kKnownMismatches{"Otway-Rees ProVerif", "TLS ProVerif"};

  int within = 0;
  std::vector<std::string> misses;
  bool all_known = true;
  for (const auto& r : rows) {
    double got = results::bench_delta(r.all, r.sgl);
    if (std::fabs(got - r.printed) <= kTolerance) {
      ++within;
      continue;
    }
    std::string label = std::string(r.protocol) + " " + r.tool;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s %.2f vs %.2f", label.c_str(), got, r.printed);
    misses.push_back(buf);
    all_known &= kKnownMismatches.count(label) > 0;
  }
  std::string detail = std::to_string(within) + "/" + std::to_string(std::size(rows)) + " within ±0.01";
  if (misses.empty()) return {Verdict::Pass, detail};
  detail += "; mismatches:";
  for (const auto& m : misses) detail += " [" + m + "]";
  if (all_known) detail += " (known: printed values inconsistent with their columns)";
  return {Verdict::Fail, detail, all_known};
}

Verdict validator_fixtures() {
  Checks c;
  auto quick = load_source("QuickFix.AnBx");
  auto diags = semantics::check_source(quick);
  std::vector<std::string> codes;
  for (const auto& d : diags) codes.push_back(d.code);
  c.expect(codes == std::vector<std::string>{"E-MODE-AGENT", "E-SYMKEY"}, "quick-fix fixture codes");
  for (const auto& d : diags) c.expect(d.fixes.size() == 2, d.code + " offers two fixes");

  auto auth = load_source("AuthVerifiers.AnBx");
  auto auth_diags = semantics::check_source(auth);
  c.expect(auth_diags.size() == 1 && auth_diags[0].code == "E-MODE-AUTHVERS", "auth-verifiers fixture code");

  int applied = 0;
  for (const auto* src : {&quick, &auth}) {
    auto before = semantics::check_source(*src);
    for (const auto& d : before) {
      for (const auto& fix : d.fixes) {
        auto fixed = *src;
        fixed.text = syntax::apply_edit(src->text, fix);
        auto after = semantics::check_source(fixed);
        c.expect(count_code(after, d.code) < count_code(before, d.code), d.code + " fix '" + fix.label + "'");
        ++applied;
      }
    }
  }
  c.expect(applied >= 5, "at least five fixes applied");
  return c.verdict(std::to_string(applied) + " fixes applied");
}

Verdict channel_lowering() {
  Checks c;
  auto model = load_model("Fresh_From_A.AnBx");
  // Fresh transport A -> B,@(A|B|B) : K with auth A, verifier B, dest B.
  auto r = transform::compile_channels(model);
  c.expect(r.ok(), "lowering succeeds");
  if (!r.ok()) return c.verdict("");
  c.expect(r.generated_nonces.size() == 1, "one nonce generated");
  const std::string n = r.generated_nonces.empty() ? "?" : r.generated_nonces[0];
  std::vector<std::string> actions;
  for (const auto& a : r.model->actions) actions.push_back(syntax::print_action(a));
  c.expect(actions.size() >= 2 && actions[0] == "B -> A : {B," + n + "}pk(A)", "challenge {r,N}pk(auth)");
  c.expect(actions.size() >= 2 && actions[1] == "A -> B : {{" + n + ",K}inv(sk(A))}pk(B)",
           "response {{N,payload}inv(sk(auth))}pk(dest)");
  c.expect(semantics::validate(*r.model).empty(), "lowered model validates");
  auto reparsed = syntax::parse(syntax::SourceFile::from_text(syntax::pretty_print(*r.model), syntax::Dialect::AnB));
  c.expect(reparsed.ok() && semantics::validate(*reparsed.model).empty(), "printed AnB validates as AnB");
  return c.verdict(actions.size() >= 2 ? actions[0] + " / " + actions[1] : "");
}

Verdict goal_splitting() {
  Checks c;
  auto model = load_model("Fresh_From_A.AnBx");
  c.expect(model.goals.size() == 6, "fixture has six goals");
  auto r = transform::split_goals(model);
  c.expect(r.ok() && r.models.size() == 6, "six models");
  std::vector<syntax::Goal> concatenated;
  for (const auto& part : r.models) {
    c.expect(part.goals.size() == 1, part.name.name + " has one goal");
    if (!part.goals.empty()) concatenated.push_back(part.goals[0]);
    auto same = part;
    same.name = model.name;
    same.goals = model.goals;
    c.expect(same == model, part.name.name + " keeps every other section");
  }
  c.expect(concatenated == model.goals, "goal concatenation equals the original");
  return c.verdict(std::to_string(r.models.size()) + " single-goal models");
}

Verdict scheduler_properties() {
  Checks c;
  constexpr int kTasks = 1000;
  std::mt19937 rng(1000);
  const TaskKind kinds[] = {TaskKind::Compile, TaskKind::OfmcOneSession, TaskKind::ProVerif,
                            TaskKind::OfmcMultiSession, TaskKind::Generic};
  const char* classes[] = {"Safe", "Attack", "Inconclusive"};

  scheduler::SchedulerConfig cfg;
  cfg.max_parallel = 4;
  auto executor = std::make_shared<scheduler::MockExecutor>(adapters::MockScript{}, 2s);
  scheduler::Scheduler s(cfg, executor);
  int decreases_while_busy = 0;
  for (int i = 0; i < kTasks; ++i) {
    s.submit(mock_spec(kinds[rng() % 5], "t" + std::to_string(i), static_cast<int>(rng() % 4), classes[rng() % 3]));
    if (rng() % 50 == 0) {
      int cap = 1 + static_cast<int>(rng() % 8);
      if (cap < s.max_parallel() && s.stats().running > cap) ++decreases_while_busy;
      s.set_max_parallel(cap);
    }
  }
  bool idle = s.wait_idle(50s);
  c.expect(idle, "all tasks complete");

  // Replay the event log against an independent model of the queue.
  std::map<scheduler::TaskId, std::pair<int, std::uint64_t>> key;
  std::set<std::pair<std::pair<int, std::uint64_t>, scheduler::TaskId>> waiting;
  std::set<scheduler::TaskId> running;
  std::uint64_t order = 0;
  int starts = 0, peak = 0;
  for (const auto& e : s.events().all()) {
    switch (e.type) {
      case scheduler::EventType::TaskEnqueued:
        key[e.task] = {static_cast<int>(e.priority), order++};
        waiting.insert({key[e.task], e.task});
        break;
      case scheduler::EventType::TaskStarted: {
        ++starts;
        c.expect(!waiting.empty() && waiting.begin()->second == e.task,
                 "task " + std::to_string(e.task) + " started ahead of a smaller (priority, seq)");
        waiting.erase({key[e.task], e.task});
        running.insert(e.task);
        peak = std::max(peak, static_cast<int>(running.size()));
        c.expect(static_cast<int>(running.size()) <= e.max_parallel,
                 "running " + std::to_string(running.size()) + " over cap " + std::to_string(e.max_parallel));
        break;
      }
      case scheduler::EventType::TaskTerminal:
        running.erase(e.task);
        waiting.erase({key[e.task], e.task});
        break;
      case scheduler::EventType::OutputChunk: break;
    }
  }
  c.expect(starts == kTasks, "every task started");
  int finished = 0;
  for (const auto& row : s.snapshot()) finished += row.state == TaskState::Finished;
  c.expect(finished == kTasks, "no task interrupted by a cap decrease");

  // Timeout 0 never fires, however far the clock moves.
  {
    auto clock = std::make_shared<scheduler::ManualClock>();
    scheduler::SchedulerConfig zero;
    zero.max_parallel = 1;
    zero.timeout_minutes = 0;
    scheduler::Scheduler z(zero, executor, clock);
    auto id = z.submit(mock_spec(TaskKind::Generic, "long", 200, "Safe"));
    std::this_thread::sleep_for(50ms);
    clock->advance(std::chrono::hours(24 * 365));
    z.enforce_timeout();
    z.wait(id, 10s);
    c.expect(z.result(id)->row.state == TaskState::Finished, "timeout 0 never times out");
  }

  // Scaled timeout on a mock that ignores SIGTERM, default grace window.
  double overshoot = 0;
  {
    constexpr auto kGrace = 2s;
    constexpr auto kMinute = 200ms;
    TempDir dir;
    std::ofstream(dir.path / "stubborn.mock") << "ignore_term = 1\n";
    scheduler::SchedulerConfig timed;
    timed.max_parallel = 1;
    timed.timeout_minutes = 1;
    timed.minute_length = kMinute;
    scheduler::Scheduler t(timed, std::make_shared<scheduler::ProcessExecutor>(kGrace));
    auto spec = mock_spec(TaskKind::Generic, "stubborn", 60000, "Safe");
    spec.plan.env["ANBX_MOCK_SCRIPT"] = (dir.path / "stubborn.mock").string();
    auto t0 = std::chrono::steady_clock::now();
    auto id = t.submit(spec);
    t.wait(id, 30s);
    overshoot = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0 - kMinute).count();
    c.expect(t.result(id)->row.state == TaskState::TimedOut, "over-long mock timed out");
    c.expect(overshoot <= 2 * std::chrono::duration<double>(kGrace).count(), "killed within twice the grace window");
  }

  char buf[200];
  std::snprintf(buf, sizeof buf, "%d tasks, peak %d running, %d busy cap decreases, timeout overshoot %.2f s", kTasks,
                peak, decreases_while_busy, overshoot);
  return c.verdict(buf);
}

Verdict one_session_first() {
  Checks c;
  for (auto outcome : {Outcome::Attack, Outcome::Safe}) {
    adapters::MockScript script;
    script.outcome = outcome;
    scheduler::Scheduler s({}, std::make_shared<scheduler::MockExecutor>(script, 2s));
    auto root = s.submit_pipeline(adapters::plan_one_session_first(kMock, "NSPK.AnB", 3, "NSPK"));
    c.expect(s.wait(root, 4s), "pipeline completes");
    std::vector<scheduler::Event> enqueued;
    for (const auto& e : s.events().all())
      if (e.type == scheduler::EventType::TaskEnqueued) enqueued.push_back(e);
    if (outcome == Outcome::Attack) {
      c.expect(enqueued.size() == 1, "Attack on step one enqueues nothing more");
    } else {
      c.expect(enqueued.size() == 2, "Safe on step one enqueues the second step");
      c.expect(enqueued.size() == 2 && enqueued[1].sessions == 3, "second step runs n sessions");
      c.expect(enqueued.size() == 2 && enqueued[1].text.find("--numSess 3") != std::string::npos,
               "second step command line carries n");
    }
  }
  return c.verdict("Attack stops, Safe escalates to 3 sessions");
}

Verdict single_goal_speedup() {
  Checks c;
  results::BenchJob job;
  job.protocol = "Six";
  job.all_goals = mock_spec(TaskKind::OfmcOneSession, "Six", 1200, "Safe");
  for (int i = 1; i <= 6; ++i)
    job.single_goals.push_back(mock_spec(TaskKind::OfmcOneSession, "Six_goal" + std::to_string(i), 200, "Safe"));
  results::BenchOptions options;
  options.max_parallel = 6;
  options.executor = std::make_shared<scheduler::ProcessExecutor>();
  auto rows = results::bench_run({job}, options);
  c.expect(rows.size() == 1 && rows[0].status.empty(), "bench run succeeds");
  if (rows.empty()) return c.verdict("");
  const auto& r = rows[0];
  c.expect(r.single_seconds < 0.5 * r.all_seconds, "single-goal wall under half the all-goals wall");
  char buf[120];
  std::snprintf(buf, sizeof buf, "all %.3f s, sgl %.3f s, ratio %.2f", r.all_seconds, r.single_seconds,
                r.single_seconds / r.all_seconds);
  return c.verdict(buf);
}

int fuzz_seconds_option = -1;

Verdict parser_robustness() {
  Checks c;
  std::vector<std::string> seeds;
  for (const auto& path : corpus()) {
    auto src = syntax::SourceFile::load(path);
    seeds.push_back(src.text);
    auto first = syntax::parse(src);
    c.expect(first.ok(), path.filename().string() + " parses");
    if (!first.ok()) continue;
    auto printed = syntax::pretty_print(*first.model);
    auto second = syntax::parse(syntax::SourceFile::from_text(printed, src.dialect));
    c.expect(second.ok() && *second.model == *first.model, path.filename().string() + " round trips");
    c.expect(second.ok() && syntax::pretty_print(*second.model) == printed, path.filename().string() + " idempotent");
  }
  const int roundtrip_files = static_cast<int>(seeds.size());

  int budget = fuzz_seconds_option;
  if (budget < 0) {
    const char* env = std::getenv("ANBX_FUZZ_SECONDS");
    budget = env ? std::atoi(env) : 600;
  }
  const std::vector<std::string> dictionary{
      "Protocol:", "Types:", "Definitions:", "Equations:", "Knowledge:", "Actions:", "Goals:", "Agent",
      "Number", "SymmetricKey", "PublicKey", "Function", "Certified", "->", ",@(", ",(", "|", "-", "{|",
      "|}", "{", "}", "inv(", "pk(", "sk(", "hash(", "exp(", "secret between", "authenticates", "weakly",
      " on ", "#", "\n", ";", ",", ":", "=", "A", "B", "Msg", "K", "(", ")", "@", ": Agent,Number -> Number"};

  std::mt19937_64 rng(0x616e6278);
  auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(budget);
  long iterations = 0, parsed_ok = 0, crashes = 0, roundtrip_breaks = 0;
  std::string first_problem;
  while (std::chrono::steady_clock::now() < deadline || iterations == 0) {
    std::string text = seeds[rng() % seeds.size()];
    switch (rng() % 4) {
      case 0: {  // byte edits
        int edits = 1 + static_cast<int>(rng() % 8);
        for (int e = 0; e < edits && !text.empty(); ++e) {
          std::size_t pos = rng() % text.size();
          switch (rng() % 3) {
            case 0: text[pos] = static_cast<char>(rng() % 256); break;
            case 1: text.erase(pos, 1 + rng() % 6); break;
            case 2: text.insert(pos, 1, static_cast<char>(rng() % 128)); break;
          }
        }
        break;
      }
      case 1: {  // token insertions
        int edits = 1 + static_cast<int>(rng() % 6);
        for (int e = 0; e < edits; ++e) text.insert(rng() % (text.size() + 1), dictionary[rng() % dictionary.size()]);
        break;
      }
      case 2: {  // splice two seeds
        const auto& other = seeds[rng() % seeds.size()];
        std::size_t cut = text.empty() ? 0 : rng() % text.size();
        std::size_t from = other.empty() ? 0 : rng() % other.size();
        text = text.substr(0, cut) + other.substr(from);
        break;
      }
      case 3: {  // deep nesting
        int depth = 1 + static_cast<int>(rng() % 3000);
        std::string nest;
        for (int i = 0; i < depth; ++i) nest += dictionary[15 + rng() % 11];
        text.insert(rng() % (text.size() + 1), nest);
        break;
      }
    }
    ++iterations;
    try {
      auto dialect = rng() % 2 ? syntax::Dialect::AnBx : syntax::Dialect::AnB;
      auto src = syntax::SourceFile::from_text(text, dialect);
      auto r = syntax::parse(src);
      for (const auto& d : r.diagnostics)
        if (d.range.begin > d.range.end || d.range.end > text.size()) {
          ++crashes;
          if (first_problem.empty()) first_problem = "diagnostic span out of bounds";
        }
      if (!r.ok()) continue;
      ++parsed_ok;
      semantics::check_source(src);
      auto printed = syntax::pretty_print(*r.model);
      auto again = syntax::parse(syntax::SourceFile::from_text(printed, r.model->dialect));
      if (!again.ok() || !(*again.model == *r.model)) {
        ++roundtrip_breaks;
        if (first_problem.empty()) first_problem = "round trip broke on a fuzzed input";
      }
      if (!syntax::has_errors(semantics::validate(*r.model))) {
        transform::compile_channels(*r.model);
        transform::split_goals(*r.model);
      }
    } catch (const std::exception& e) {
      ++crashes;
      if (first_problem.empty()) first_problem = std::string("exception: ") + e.what();
    }
  }
  c.expect(crashes == 0, first_problem.empty() ? "crash" : first_problem);
  c.expect(roundtrip_breaks == 0, first_problem.empty() ? "round trip" : first_problem);
  char buf[200];
  std::snprintf(buf, sizeof buf, "%d files round trip; fuzz %d s: %ld inputs, %ld parsed, %ld crashes, %ld round-trip breaks",
                roundtrip_files, budget, iterations, parsed_ok, crashes, roundtrip_breaks);
  return c.verdict(buf);
}

Verdict docker_plan() {
  Checks c;
  auto plans = adapters::docker_run_plan("last/docker-compose.yml", "current/docker-compose.yml");
  const std::string golden =
      R"({"executable":"docker","args":["compose","-f","last/docker-compose.yml","down"],"workingDir":"","env":{},"stdinData":null})"
      "\n"
      R"({"executable":"docker","args":["container","prune","--force"],"workingDir":"","env":{},"stdinData":null})"
      "\n"
      R"({"executable":"docker","args":["network","prune","--force"],"workingDir":"","env":{},"stdinData":null})"
      "\n"
      R"({"executable":"docker","args":["compose","-f","current/docker-compose.yml","up"],"workingDir":"","env":{},"stdinData":null})"
      "\n";
  c.expect(plans.size() == 4, "four commands");
  c.expect(adapters::encode_plans(plans) == golden, "byte-exact serialization");
  c.expect(adapters::decode_plans(golden) == plans, "golden decodes to the plan");
  return c.verdict("down, container prune, network prune, up");
}

Verdict config_validation() {
  Checks c;
  TempDir dir;
  using P = fs::perms;
  auto file = [&](const std::string& name, P perms) {
    auto p = dir.path / name;
    std::ofstream(p) << "#!/bin/sh\n";
    fs::permissions(p, perms, fs::perm_options::replace);
    return p;
  };
  auto folder = [&](const std::string& name, P perms) {
    auto p = dir.path / name;
    fs::create_directory(p);
    fs::permissions(p, perms, fs::perm_options::replace);
    return p;
  };
  const P rwx = P::owner_all;
  struct Case {
    std::string name;
    std::function<void(service::WorkbenchConfig&)> set;
    std::string code;  ///< empty: no issue expected
  };
  std::vector<Case> cases{
      {"executable missing", [&](auto& c) { c.ofmc_path = dir.path / "absent"; }, "E-PATH-MISSING"},
      {"executable is a directory", [&](auto& c) { c.ofmc_path = folder("d1", rwx); }, "E-PATH-TYPE"},
      {"executable without read", [&](auto& c) { c.anbxc_path = file("x1", P::owner_exec); }, "E-PERM-READ"},
      {"executable without execute",
       [&](auto& c) { c.proverif_path = file("x2", P::owner_read | P::owner_write); }, "E-PERM-EXEC"},
      {"executable ok", [&](auto& c) { c.ofmc_path = file("x3", P::owner_read | P::owner_exec); }, ""},
      {"config file missing", [&](auto& c) { c.anbxc_config_path = dir.path / "nocfg"; }, "E-PATH-MISSING"},
      {"config file is a directory", [&](auto& c) { c.anbxc_config_path = folder("d2", rwx); }, "E-PATH-TYPE"},
      {"config file without read", [&](auto& c) { c.anbxc_config_path = file("c1", P::owner_write); }, "E-PERM-READ"},
      {"config file without write", [&](auto& c) { c.anbxc_config_path = file("c2", P::owner_read); },
       "E-PERM-WRITE"},
      {"config file ok", [&](auto& c) { c.anbxc_config_path = file("c3", P::owner_read | P::owner_write); }, ""},
      {"directory missing", [&](auto& c) { c.log_root = dir.path / "nodir"; }, "E-PATH-MISSING"},
      {"directory is a file", [&](auto& c) { c.log_root = file("f1", rwx); }, "E-PATH-TYPE"},
      {"directory without read", [&](auto& c) { c.log_root = folder("d3", P::owner_write | P::owner_exec); },
       "E-PERM-READ"},
      {"directory without write", [&](auto& c) { c.log_root = folder("d4", P::owner_read | P::owner_exec); },
       "E-PERM-WRITE"},
      {"directory without execute", [&](auto& c) { c.log_root = folder("d5", P::owner_read | P::owner_write); },
       "E-PERM-EXEC"},
      {"directory ok", [&](auto& c) { c.log_root = folder("d6", rwx); }, ""},
      {"negative parallelism", [&](auto& c) { c.max_parallel = -1; }, "E-LIMIT"},
      {"negative timeout", [&](auto& c) { c.timeout_minutes = -1; }, "E-LIMIT"},
  };
  int matched = 0;
  for (const auto& k : cases) {
    service::WorkbenchConfig cfg;
    k.set(cfg);
    auto issues = service::validate_config(cfg);
    bool ok = k.code.empty() ? issues.empty() : issues.size() == 1 && issues[0].code == k.code;
    c.expect(ok, k.name);
    cfg.permission_checks = false;
    auto relaxed = service::validate_config(cfg);
    bool permission = k.code.rfind("E-PERM-", 0) == 0;
    bool suppressed = permission || k.code.empty() ? relaxed.empty() : relaxed.size() == 1 && relaxed[0].code == k.code;
    c.expect(suppressed, k.name + " with checks disabled");
    matched += ok && suppressed;
  }
  for (auto p : {"d3", "d4", "d5"}) fs::permissions(dir.path / p, rwx, fs::perm_options::replace);
  return c.verdict(std::to_string(matched) + "/" + std::to_string(cases.size()) + " cases, checks on and off");
}

std::optional<fs::path> on_path(const std::string& name) {
  try {
    return adapters::resolve_executable(name);
  } catch (const Error&) {
    return std::nullopt;
  }
}

Verdict tool_integration() {
  auto ofmc = on_path("ofmc");
  auto proverif = on_path("proverif");
  auto anbxc = on_path("anbxc");
  if (!ofmc && !(proverif && anbxc)) return {Verdict::Skip, "ofmc, proverif and anbxc not found on PATH"};

  Checks c;
  std::vector<std::string> notes;
  TempDir dir;
  for (auto name : {"Fresh_From_A.AnBx", "NSPK.AnB"}) fs::copy_file(kFixtures / name, dir.path / name);
  service::WorkbenchConfig cfg;
  cfg.ofmc_path = ofmc;
  cfg.proverif_path = proverif;
  cfg.anbxc_path = anbxc;
  cfg.max_parallel = 6;

  if (ofmc) {
    service::Workbench wb(cfg, dir.path);
    service::VerifyRequest fresh;
    fresh.path = "Fresh_From_A.AnBx";
    fresh.single_goals = true;
    wb.verify(fresh);
    service::VerifyRequest nspk;
    nspk.path = "NSPK.AnB";
    nspk.sessions = 2;
    wb.verify(nspk);
    c.expect(wb.scheduler().wait_idle(std::chrono::minutes(30)), "OFMC runs complete");
    int fresh_safe = 0;
    bool nspk_attack = false;
    for (const auto& p : wb.results().snapshot().ordered_view(true)) {
      for (const auto& g : p.goals) {
        if (p.protocol == "Fresh_From_A") fresh_safe += g.status == Outcome::Safe;
        if (p.protocol == "NSPK") nspk_attack |= g.status == Outcome::Attack;
      }
    }
    c.expect(fresh_safe == 6, "lowered fresh exchange Safe on all six goals");
    c.expect(nspk_attack, "NSPK classified Attack");
    notes.push_back("OFMC: " + std::to_string(fresh_safe) + "/6 Safe, NSPK " + (nspk_attack ? "Attack" : "no attack"));
  } else {
    notes.push_back("OFMC checks skipped (ofmc not found)");
  }

  if (proverif && anbxc) {
    service::Workbench wb(cfg, dir.path);
    auto rows = wb.bench({"NSPK.AnB"}, service::VerifyTool::ProVerif, 1, 1, 6);
    c.expect(rows.size() == 1 && rows[0].status.empty(), "ProVerif bench runs");
    if (!rows.empty()) {
      c.expect(rows[0].single_seconds < rows[0].all_seconds, "ProVerif single-goal faster than all-goals on NSPK");
      char buf[100];
      std::snprintf(buf, sizeof buf, "ProVerif NSPK all %.3f s, sgl %.3f s", rows[0].all_seconds, rows[0].single_seconds);
      notes.push_back(buf);
    }
  } else {
    notes.push_back("ProVerif checks skipped (proverif or anbxc not found)");
  }
  std::string detail;
  for (const auto& n : notes) detail += (detail.empty() ? "" : "; ") + n;
  return c.verdict(detail);
}

}  // namespace

int main(int argc, char** argv) {
  std::string only;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--fuzz-seconds" && i + 1 < argc) {
      fuzz_seconds_option = std::atoi(argv[++i]);
    } else if (a == "--only" && i + 1 < argc) {
      only = argv[++i];
    } else {
      std::fprintf(stderr, "usage: %s [--fuzz-seconds N] [--only NAME]\n", argv[0]);
      return 2;
    }
  }

  const std::vector<Criterion> criteria{
      {"delta arithmetic", 1, delta_arithmetic},
      {"validator fixtures", 1, validator_fixtures},
      {"channel lowering", 1, channel_lowering},
      {"goal splitting", 1, goal_splitting},
      {"scheduler properties", 60, scheduler_properties},
      {"one session first", 5, one_session_first},
      {"single-goal speedup", 10, single_goal_speedup},
      {"parser robustness", 0, parser_robustness},
      {"docker plan", 1, docker_plan},
      {"config validation", 1, config_validation},
      {"tool integration (optional)", 0, tool_integration},
  };

  int passed = 0, failed = 0, known = 0, skipped = 0;
  for (const auto& k : criteria) {
    if (!only.empty() && k.name != only) continue;
    auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = k.run();
    } catch (const std::exception& e) {
      v = {Verdict::Fail, std::string("exception: ") + e.what()};
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (k.limit_seconds > 0 && seconds > k.limit_seconds && v.kind != Verdict::Skip) {
      char buf[80];
      std::snprintf(buf, sizeof buf, "; over the %.0f s limit", k.limit_seconds);
      v.kind = Verdict::Fail;
      v.known = false;
      v.detail += buf;
    }
    const char* tag = v.kind == Verdict::Pass ? "PASS" : v.kind == Verdict::Fail ? "FAIL" : "SKIP";
    std::printf("%s  %-28s %8.3f s  %s\n", tag, k.name.c_str(), seconds, v.detail.c_str());
    std::fflush(stdout);
    if (v.kind == Verdict::Pass) ++passed;
    if (v.kind == Verdict::Skip) ++skipped;
    if (v.kind == Verdict::Fail) (v.known ? known : failed)++;
  }
  std::printf("%d passed, %d failed, %d failed on known-unattainable cases, %d skipped\n", passed, failed, known,
              skipped);
  return failed == 0 ? 0 : 1;
}
