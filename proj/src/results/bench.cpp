#include "anbx/results/bench.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include "anbx/error.hpp"

namespace anbx::results {

using adapters::Outcome;
using scheduler::TaskState;

std::int64_t bench_delta_hundredths(std::int64_t all_us, std::int64_t single_us) {
  if (all_us <= 0) throw Error("E-DIV0", "all-goals time must be positive");
  // 100 (percent) * 100 (hundredths)
  std::int64_t num = 10000 * (single_us - all_us);
  std::int64_t mag = num < 0 ? -num : num;
  std::int64_t q = (2 * mag + all_us) / (2 * all_us);
  return num < 0 ? -q : q;
}

double bench_delta(double all_seconds, double single_seconds) {
  if (!(all_seconds > 0)) throw Error("E-DIV0", "all-goals time must be positive");
  auto all_us = static_cast<std::int64_t>(std::llround(all_seconds * 1e6));
  auto single_us = static_cast<std::int64_t>(std::llround(single_seconds * 1e6));
  if (all_us <= 0) throw Error("E-DIV0", "all-goals time is below one microsecond");
  return static_cast<double>(bench_delta_hundredths(all_us, single_us)) / 100.0;
}

std::string format_delta(double delta) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", delta);
  std::string s = buf;
  return s == "-0.00" ? "0.00" : s;
}

namespace {

struct RunOutcome {
  double seconds = 0;
  std::vector<Outcome> verdicts;
  std::set<std::string> problems;
};

RunOutcome run_batch(scheduler::Scheduler& s, const std::vector<adapters::TaskSpec>& specs) {
  RunOutcome out;
  auto t0 = std::chrono::steady_clock::now();
  std::vector<scheduler::TaskId> ids;
  for (const auto& spec : specs) ids.push_back(s.submit(spec));
  for (auto id : ids) s.wait(id);
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (auto id : ids) {
    auto r = s.result(id)->row;
    if (r.state == TaskState::TimedOut) out.problems.insert("Timeout");
    if (r.state == TaskState::Killed) out.problems.insert("Killed");
    if (!r.outcome) continue;
    out.verdicts.push_back(r.outcome->outcome);
    if (r.outcome->outcome == Outcome::ToolError) out.problems.insert("ToolError");
  }
  return out;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::vector<BenchRow> bench_run(const std::vector<BenchJob>& jobs, const BenchOptions& options) {
  if (options.repetitions < 1) throw Error("E-BADN", "repetitions must be at least 1");
  if (options.max_parallel < 1) throw Error("E-BADN", "max parallel tasks must be at least 1");
  auto executor = options.executor ? options.executor : std::make_shared<scheduler::ProcessExecutor>();
  scheduler::SchedulerConfig cfg;
  cfg.max_parallel = options.max_parallel;
  scheduler::Scheduler s(cfg, executor);

  std::vector<BenchRow> rows;
  for (const auto& job : jobs) {
    BenchRow row;
    row.protocol = job.protocol;
    row.goals = static_cast<int>(job.single_goals.size());
    std::set<std::string> problems;
    double all_total = 0, single_total = 0;
    for (int rep = 0; rep < options.repetitions; ++rep) {
      auto all = run_batch(s, {job.all_goals});
      all_total += all.seconds;
      problems.insert(all.problems.begin(), all.problems.end());
      if (job.single_goals.empty()) continue;
      auto single = run_batch(s, job.single_goals);
      single_total += single.seconds;
      problems.insert(single.problems.begin(), single.problems.end());
      if (rep + 1 == options.repetitions) {
        row.attacks = 0;
        for (Outcome o : single.verdicts) row.attacks += o == Outcome::Attack;
      }
    }
    row.all_seconds = all_total / options.repetitions;
    row.single_seconds = single_total / options.repetitions;
    if (job.single_goals.empty()) {
      problems.insert("no goals");
    } else if (row.all_seconds > 0) {
      row.delta_percent = bench_delta(row.all_seconds, row.single_seconds);
    }
    for (const auto& p : problems) row.status += (row.status.empty() ? "" : ",") + p;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_bench_table(const std::vector<BenchRow>& rows) {
  std::vector<std::vector<std::string>> cells{{"Protocol", "Goals/Attacks", "all", "sgl", "Δ%", ""}};
  for (const auto& r : rows)
    cells.push_back({r.protocol, std::to_string(r.goals) + "/" + std::to_string(r.attacks), fixed(r.all_seconds, 3),
                     fixed(r.single_seconds, 3), r.delta_percent ? format_delta(*r.delta_percent) : "-", r.status});
  // Display width, counting UTF-8 continuation bytes as zero.
  auto width = [](const std::string& s) {
    std::size_t w = 0;
    for (unsigned char c : s) w += (c & 0xC0) != 0x80;
    return w;
  };
  std::vector<std::size_t> widths(cells[0].size(), 0);
  for (const auto& row : cells)
    for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], width(row[i]));
  std::string out;
  for (const auto& row : cells) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::string pad(widths[i] - width(row[i]), ' ');
      // Text columns align left, numbers right.
      line += i < 2 || i == 5 ? row[i] + pad : pad + row[i];
      if (i + 1 < row.size()) line += "  ";
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

std::string format_bench_csv(const std::vector<BenchRow>& rows) {
  std::string out = "Protocol,Goals,Attacks,all,sgl,Delta%,status\n";
  for (const auto& r : rows)
    out += r.protocol + "," + std::to_string(r.goals) + "," + std::to_string(r.attacks) + "," +
           fixed(r.all_seconds, 6) + "," + fixed(r.single_seconds, 6) + "," +
           (r.delta_percent ? format_delta(*r.delta_percent) : "") + "," + r.status + "\n";
  return out;
}

}  // namespace anbx::results
