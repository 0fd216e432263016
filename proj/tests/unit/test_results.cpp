#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "doctest.h"

#include "anbx/error.hpp"
#include "anbx/results/bench.hpp"
#include "anbx/results/tree.hpp"

using namespace anbx::results;
using anbx::adapters::Outcome;
using anbx::adapters::TaskKind;
using anbx::adapters::TaskSpec;
using anbx::adapters::Tool;
using namespace std::chrono_literals;

namespace {

std::string error_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const anbx::Error& e) {
    return e.code();
  }
  return "";
}

// Straight floating-point evaluation of the formula, for comparison.
double delta_oracle(long double all, long double single) {
  long double d = 100.0L * (single - all) / all;
  return static_cast<double>(std::round(d * 100.0L) / 100.0L);
}

GoalResult goal(const std::string& p, const std::string& g, Outcome o, const std::string& tool = "ofmc",
                std::optional<int> sessions = 1) {
  return GoalResult{p, g, o, sessions, tool, {}};
}

std::vector<std::string> labels(const ProtocolResults& p) {
  std::vector<std::string> out;
  for (const auto& g : p.goals) out.push_back(g.goal);
  return out;
}

TaskSpec mock_task(const std::string& file, int delay_ms, const std::string& cls = "Safe") {
  TaskSpec s;
  s.kind = TaskKind::OfmcOneSession;
  s.tool = Tool::Ofmc;
  s.plan.executable = "mock";
  s.plan.args = {file, "--delay-ms", std::to_string(delay_ms), "--class", cls};
  s.protocol = std::filesystem::path(file).stem().string();
  s.goal = anbx::adapters::goal_label_from_name(file);
  return s;
}

std::shared_ptr<anbx::scheduler::Executor> mock_executor() {
  return std::make_shared<anbx::scheduler::MockExecutor>(anbx::adapters::MockScript{});
}

}  // namespace

TEST_CASE("delta examples") {
  CHECK(bench_delta(0.090, 0.032) == -64.44);
  CHECK(format_delta(bench_delta(0.090, 0.032)) == "-64.44");
  CHECK(format_delta(bench_delta(1.22, 23.25)) == "1805.74");
  CHECK(format_delta(bench_delta(70.24, 68.69)) == "-2.21");
  for (double x : {0.001, 0.5, 3.0, 266.57}) CHECK(format_delta(bench_delta(x, x)) == "0.00");
  CHECK(error_code([] { bench_delta(0, 1); }) == "E-DIV0");
  CHECK(error_code([] { bench_delta(-1, 1); }) == "E-DIV0");
  CHECK(error_code([] { bench_delta_hundredths(0, 5); }) == "E-DIV0");
}

TEST_CASE("delta rounding is half away from zero") {
  CHECK(bench_delta_hundredths(800000, 900000) == 1250);
  CHECK(bench_delta_hundredths(200000, 200001) == 0);
  CHECK(bench_delta_hundredths(2000, 2001) == 5);
  // 1/20000 of all is exactly half a hundredth of a percent.
  CHECK(bench_delta_hundredths(20000, 20001) == 1);
  CHECK(bench_delta_hundredths(20000, 19999) == -1);
  CHECK(bench_delta_hundredths(40000, 40001) == 0);
}

TEST_CASE("delta agrees with the plain formula") {
  std::mt19937_64 rng(11);
  int compared = 0;
  for (int i = 0; i < 20000; ++i) {
    std::int64_t all = 1 + static_cast<std::int64_t>(rng() % 400000000);
    std::int64_t single = static_cast<std::int64_t>(rng() % 400000000);
    long double exact = 10000.0L * static_cast<long double>(single - all) / static_cast<long double>(all);
    // Skip values too close to a rounding tie for long double to decide.
    if (std::fabs(std::fabs(exact - std::trunc(exact)) - 0.5L) < 1e-6L) continue;
    ++compared;
    CHECK(bench_delta_hundredths(all, single) == std::llround(exact));
  }
  CHECK(compared > 19000);
}

TEST_CASE("delta reproduces the published table where its columns agree") {
  struct Pair {
    double all, sgl, printed;
  };
  const Pair table[] = {
      {5.64, 6.07, 7.62},       {0.090, 0.032, -64.44}, {16.05, 19.14, 19.25},  {0.257, 0.081, -68.48},
      {32.86, 34.78, 5.84},     {2.774, 0.980, -64.67}, {1.22, 23.25, 1805.74}, {0.337, 0.093, -72.40},
      {3.47, 4.19, 20.75},      {0.042, 0.021, -50.00}, {0.78, 0.81, 3.85},     {0.062, 0.028, -54.84},
      {0.32, 0.88, 175.00},     {0.077, 0.027, -64.94}, {16.78, 17.38, 3.58},   {70.24, 68.69, -2.21},
      {266.57, 325.21, 22.00},  {8.329, 2.401, -71.17}, {2.38, 4.28, 79.83},    {0.131, 0.030, -77.10},
  };
  for (const auto& p : table) {
    CAPTURE(p.all);
    CAPTURE(p.sgl);
    CHECK(std::fabs(bench_delta(p.all, p.sgl) - p.printed) <= 0.01);
    CHECK(bench_delta(p.all, p.sgl) == delta_oracle(p.all, p.sgl));
  }
  // The two remaining rows print values their own columns do not give.
  CHECK(format_delta(bench_delta(0.116, 0.038)) == "-67.24");
  CHECK(format_delta(bench_delta(0.504, 0.068)) == "-86.51");
}

TEST_CASE("natural label order") {
  CHECK(natural_less("g2", "g10"));
  CHECK_FALSE(natural_less("g10", "g2"));
  CHECK(natural_less("g1", "g2"));
  CHECK(natural_less("(all)", "g1"));
  CHECK(natural_less("g02", "g3"));
  CHECK_FALSE(natural_less("g2", "g2"));
  CHECK(natural_less("a", "ab"));
}

TEST_CASE("failing goals come first") {
  ResultTree t;
  t.ingest(goal("NSPK", "g1", Outcome::Safe));
  t.ingest(goal("NSPK", "g2", Outcome::Attack));
  auto v = t.ordered_view();
  REQUIRE(v.size() == 1);
  CHECK(labels(v[0]) == std::vector<std::string>{"g2", "g1"});

  ResultTree single;
  single.ingest(goal("X", "g1", Outcome::Safe));
  CHECK(single.size() == 1);

  t.ingest(goal("NSPK", "g2", Outcome::Safe));
  CHECK(t.size() == 2);
  CHECK(labels(t.ordered_view()[0]) == std::vector<std::string>{"g1", "g2"});
  t.ingest(goal("NSPK", "g3", Outcome::Timeout));
  t.ingest(goal("NSPK", "g10", Outcome::Inconclusive));
  t.ingest(goal("NSPK", "g4", Outcome::ToolError));
  CHECK(labels(t.ordered_view()[0]) == std::vector<std::string>{"g3", "g4", "g10", "g1", "g2"});
  t.ingest(goal("NSPK", "g1", Outcome::Safe, "ofmc", 2));
  CHECK(t.size() == 6);
}

TEST_CASE("protocol order") {
  ResultTree t;
  t.ingest(goal("NSPK", "g1", Outcome::Safe));
  t.ingest(goal("Carlsen", "g1", Outcome::Safe));
  auto insertion = t.ordered_view(false);
  auto alpha = t.ordered_view(true);
  CHECK(insertion[0].protocol == "NSPK");
  CHECK(alpha[0].protocol == "Carlsen");
  CHECK(t.ordered_view(true) == alpha);
  CHECK(t.ordered_view(false) == insertion);
  t.clear();
  CHECK(t.empty());
}

TEST_CASE("ordering holds after every ingest") {
  std::mt19937 rng(3);
  const Outcome outcomes[] = {Outcome::Safe, Outcome::Attack, Outcome::Inconclusive, Outcome::Timeout,
                              Outcome::ToolError};
  for (int round = 0; round < 50; ++round) {
    ResultTree t;
    for (int i = 0; i < 60; ++i) {
      t.ingest(goal("P" + std::to_string(rng() % 3), "g" + std::to_string(1 + rng() % 12), outcomes[rng() % 5],
                    rng() % 2 ? "ofmc" : "proverif", 1 + static_cast<int>(rng() % 2)));
      for (const auto& p : t.ordered_view()) {
        CHECK(std::is_sorted(p.goals.begin(), p.goals.end(), goal_order));
        for (std::size_t a = 0; a < p.goals.size(); ++a)
          for (std::size_t b = a + 1; b < p.goals.size(); ++b)
            CHECK_FALSE((p.goals[a].goal == p.goals[b].goal && p.goals[a].tool == p.goals[b].tool &&
                         p.goals[a].sessions == p.goals[b].sessions));
      }
    }
  }
}

TEST_CASE("ingest order does not matter for distinct keys") {
  std::vector<GoalResult> rows;
  for (int p = 0; p < 3; ++p)
    for (int g = 1; g <= 5; ++g)
      rows.push_back(goal("P" + std::to_string(p), "g" + std::to_string(g), g % 2 ? Outcome::Safe : Outcome::Attack));
  ResultTree ref;
  for (const auto& r : rows) ref.ingest(r);
  std::mt19937 rng(5);
  for (int i = 0; i < 30; ++i) {
    std::shuffle(rows.begin(), rows.end(), rng);
    ResultTree t;
    for (const auto& r : rows) t.ingest(r);
    CHECK(t.ordered_view(true) == ref.ordered_view(true));
  }
}

TEST_CASE("terminal events become goal rows") {
  anbx::scheduler::Event e;
  e.type = anbx::scheduler::EventType::TaskTerminal;
  e.tool = Tool::Ofmc;
  e.protocol = "NSPK_goal3";
  e.sessions = 2;
  e.outcome = anbx::adapters::OutcomeClass{Outcome::Attack, std::nullopt, 2, "ATTACK_FOUND"};
  ResultTree t;
  auto r = t.apply(e);
  REQUIRE(r);
  CHECK(r->protocol == "NSPK");
  CHECK(r->goal == "g3");
  CHECK(r->sessions == 2);
  CHECK(r->tool == "ofmc");

  e.protocol = "NSPK";
  CHECK(t.apply(e)->goal == kAllGoals);
  e.tool = Tool::Anbxc;
  CHECK_FALSE(t.apply(e));
  e.tool = Tool::Ofmc;
  e.outcome.reset();
  CHECK_FALSE(t.apply(e));
  e.type = anbx::scheduler::EventType::TaskStarted;
  CHECK_FALSE(t.apply(e));
  CHECK(t.size() == 2);
}

TEST_CASE("aggregator follows a scheduler") {
  anbx::scheduler::SchedulerConfig cfg;
  cfg.max_parallel = 3;
  anbx::scheduler::Scheduler s(cfg, mock_executor());
  ResultAggregator agg(s.events());
  s.submit(mock_task("Three_goal1.AnB", 10));
  s.submit(mock_task("Three_goal2.AnB", 10, "Attack"));
  s.submit(mock_task("Three_goal3.AnB", 10));
  REQUIRE(s.wait_idle(10s));
  auto view = agg.snapshot().ordered_view();
  REQUIRE(view.size() == 1);
  CHECK(view[0].protocol == "Three");
  CHECK(labels(view[0]) == std::vector<std::string>{"g2", "g1", "g3"});
  CHECK(view[0].goals[0].status == Outcome::Attack);
  agg.clear();
  CHECK(agg.snapshot().empty());
}

TEST_CASE("bench averages repetitions") {
  std::vector<BenchJob> jobs;
  for (const char* p : {"A", "B", "C"}) {
    BenchJob j;
    j.protocol = p;
    j.all_goals = mock_task(std::string(p) + ".AnB", 20);
    for (int g = 1; g <= 2; ++g)
      j.single_goals.push_back(mock_task(std::string(p) + "_goal" + std::to_string(g) + ".AnB", 10,
                                         g == 2 && p[0] == 'B' ? "Attack" : "Safe"));
    jobs.push_back(j);
  }
  auto rows = bench_run(jobs, BenchOptions{2, 2, mock_executor()});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].goals == 2);
  CHECK(rows[0].attacks == 0);
  CHECK(rows[1].attacks == 1);
  for (const auto& r : rows) {
    CHECK(r.all_seconds >= 0.020);
    CHECK(r.single_seconds >= 0.010);
    REQUIRE(r.delta_percent);
    CHECK(*r.delta_percent == bench_delta(r.all_seconds, r.single_seconds));
    CHECK(r.status.empty());
  }
  CHECK(error_code([&] { bench_run(jobs, BenchOptions{0, 2, mock_executor()}); }) == "E-BADN");
}

TEST_CASE("bench reports failed runs in the status column") {
  BenchJob j;
  j.protocol = "Broken";
  j.all_goals = mock_task("Broken.AnB", 0, "ToolError");
  j.single_goals.push_back(mock_task("Broken_goal1.AnB", 0));
  auto rows = bench_run({j}, BenchOptions{1, 1, mock_executor()});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].status == "ToolError");
  BenchJob none;
  none.protocol = "NoGoals";
  none.all_goals = mock_task("NoGoals.AnB", 0);
  rows = bench_run({none}, BenchOptions{1, 1, mock_executor()});
  CHECK(rows[0].status == "no goals");
  CHECK_FALSE(rows[0].delta_percent);
}

TEST_CASE("parallel single goals beat one all-goals run") {
  BenchJob j;
  j.protocol = "Six";
  j.all_goals = mock_task("Six.AnB", 1200);
  for (int g = 1; g <= 6; ++g) j.single_goals.push_back(mock_task("Six_goal" + std::to_string(g) + ".AnB", 200));
  auto rows = bench_run({j}, BenchOptions{1, 6, mock_executor()});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].single_seconds < 0.5 * rows[0].all_seconds);
  CHECK(rows[0].goals == 6);
}

TEST_CASE("bench table and csv") {
  std::vector<BenchRow> rows{{"Carlsen", 3, 0, 0.090, 0.032, -64.44, ""},
                             {"ISO5Pass", 3, 2, 1.22, 23.25, 1805.74, ""},
                             {"Broken", 1, 0, 0.5, 0.25, -50.0, "ToolError"}};
  CHECK(format_bench_table(rows) ==
        "Protocol  Goals/Attacks    all     sgl       Δ%\n"
        "Carlsen   3/0            0.090   0.032   -64.44\n"
        "ISO5Pass  3/2            1.220  23.250  1805.74\n"
        "Broken    1/0            0.500   0.250   -50.00  ToolError\n");
  CHECK(format_bench_csv(rows) ==
        "Protocol,Goals,Attacks,all,sgl,Delta%,status\n"
        "Carlsen,3,0,0.090000,0.032000,-64.44,\n"
        "ISO5Pass,3,2,1.220000,23.250000,1805.74,\n"
        "Broken,1,0,0.500000,0.250000,-50.00,ToolError\n");
}
