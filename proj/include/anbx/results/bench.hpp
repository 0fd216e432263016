#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "anbx/adapters/pipeline.hpp"
#include "anbx/scheduler/executor.hpp"
#include "anbx/scheduler/scheduler.hpp"

namespace anbx::results {

/// 100 * (single - all) / all in hundredths, rounded half away from zero.
/// Inputs are in microseconds. Errors: E-DIV0 (all <= 0).
std::int64_t bench_delta_hundredths(std::int64_t all_us, std::int64_t single_us);

/// bench_delta_hundredths on inputs rounded to whole microseconds, as a
/// value with two decimals. Errors: E-DIV0 (all_seconds <= 0).
double bench_delta(double all_seconds, double single_seconds);

/// "%.2f" of a delta, with "-0.00" printed as "0.00".
std::string format_delta(double delta);

struct BenchRow {
  std::string protocol;
  int goals = 0;
  int attacks = 0;
  double all_seconds = 0;
  double single_seconds = 0;
  std::optional<double> delta_percent;
  /// Empty when every run gave a verdict; otherwise what went wrong.
  std::string status;
};

/// One protocol to measure: the all-goals task and one task per goal.
struct BenchJob {
  std::string protocol;
  adapters::TaskSpec all_goals;
  std::vector<adapters::TaskSpec> single_goals;
};

struct BenchOptions {
  int repetitions = 1;
  /// Slots for the parallel single-goal runs.
  int max_parallel = scheduler::default_max_parallel();
  std::shared_ptr<scheduler::Executor> executor;
};

/// For each job and repetition: the all-goals task alone, then all
/// single-goal tasks at once. Wall-clock times are averaged over the
/// repetitions. Attacks are counted over single-goal verdicts of the last
/// repetition. Failed runs are reported in the row's status instead of
/// aborting. Errors: E-BADN (repetitions < 1 or max_parallel < 1).
std::vector<BenchRow> bench_run(const std::vector<BenchJob>& jobs, const BenchOptions& options);

/// Aligned text table: Protocol, Goals/Attacks, all, sgl, Δ%.
std::string format_bench_table(const std::vector<BenchRow>& rows);
/// Comma-separated with a header line; status is the last column.
std::string format_bench_csv(const std::vector<BenchRow>& rows);

}  // namespace anbx::results
