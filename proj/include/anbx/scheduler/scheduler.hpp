#pragma once

#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "anbx/adapters/classify.hpp"
#include "anbx/adapters/pipeline.hpp"
#include "anbx/scheduler/clock.hpp"
#include "anbx/scheduler/events.hpp"
#include "anbx/scheduler/executor.hpp"
#include "anbx/scheduler/task.hpp"

namespace anbx::scheduler {

/// min(4, logical cores), at least 1.
int default_max_parallel();

struct SchedulerConfig {
  int max_parallel = default_max_parallel();
  /// 0 disables the timeout.
  int timeout_minutes = 0;
  /// Length of one timeout minute; shortened in tests.
  std::chrono::milliseconds minute_length = std::chrono::minutes(1);
  /// How often running tasks are checked against the timeout.
  std::chrono::milliseconds timeout_poll = std::chrono::milliseconds(20);
  /// When set, every task writes a log file under this root.
  std::optional<std::filesystem::path> log_root;
  /// Tool version strings for log headers, keyed by tool name.
  std::map<std::string, std::string> tool_versions;
};

/// One row of the task table.
struct TaskRow {
  TaskId id = 0;
  std::uint64_t enqueue_seq = 0;
  int console = 0;
  adapters::TaskKind kind = adapters::TaskKind::Generic;
  Priority priority = Priority::P3;
  TaskState state = TaskState::Waiting;
  bool waiting = true;
  /// Seconds since start (up to the end for terminal tasks); 0 while waiting.
  double runtime_seconds = 0;
  std::string command_line;
  std::string protocol;
  std::optional<std::string> goal;
  std::optional<int> sessions;
  std::optional<adapters::OutcomeClass> outcome;
  std::optional<int> exit_code;
  std::optional<TaskId> parent;
  std::optional<std::filesystem::path> log_file;
};

/// Everything known about a task after it ends.
struct TaskResult {
  TaskRow row;
  std::string output;
};

struct ConsoleChunk {
  TaskId task = 0;
  std::string text;
  std::vector<SpanHint> hints;
};

struct SubmitOptions {
  /// Run in this console; otherwise a new console when `new_console`,
  /// else the shared console 1.
  std::optional<int> console;
  bool new_console = false;
};

struct SchedulerStats {
  std::uint64_t started = 0;
  std::uint64_t ended = 0;
  int running = 0;
  int peak_running = 0;
};

/// Runs tasks in (priority, enqueue order) with at most max_parallel at a
/// time, without preemption. All methods are thread-safe.
class Scheduler {
 public:
  Scheduler(SchedulerConfig config, std::shared_ptr<Executor> executor,
            std::shared_ptr<const Clock> clock = std::make_shared<SteadyClock>(),
            adapters::RuleBook rules = adapters::default_rules());
  /// Kills whatever is left and waits for the workers.
  ~Scheduler();

  Scheduler(const Scheduler&) = delete;
  Scheduler& operator=(const Scheduler&) = delete;

  TaskId submit(adapters::TaskKind kind, adapters::CommandPlan plan);
  TaskId submit(adapters::TaskSpec spec, const SubmitOptions& options = {});
  /// Submits the root step; continuations are submitted when their parent
  /// finishes and their condition holds. They share the parent's console.
  TaskId submit_pipeline(adapters::PipelineStep root, const SubmitOptions& options = {});

  /// Errors: E-BADN (n < 1). Running tasks are never interrupted.
  void set_max_parallel(int n);
  int max_parallel() const;
  /// Errors: E-BADN (minutes < 0).
  void set_timeout_minutes(int minutes);
  int timeout_minutes() const;

  /// Terminates running tasks and cancels waiting ones. Already finished
  /// tasks are left alone. Errors: E-NOTASK if any id is unknown (then
  /// nothing is killed).
  void kill(const std::set<TaskId>& ids);
  void kill_all();

  /// One pass of timeout enforcement; the monitor thread calls this too.
  void enforce_timeout();

  /// Rows ordered by enqueue order.
  std::vector<TaskRow> snapshot() const;
  std::optional<TaskResult> result(TaskId id) const;
  std::vector<TaskId> children(TaskId id) const;

  std::vector<int> consoles() const;
  std::vector<ConsoleChunk> console(int id) const;
  /// Allocates an empty console.
  int new_console();

  /// Blocks until nothing is waiting or running.
  bool wait_idle(std::chrono::milliseconds timeout = std::chrono::hours(24));
  /// Blocks until the task is terminal and all its continuations are too.
  bool wait(TaskId id, std::chrono::milliseconds timeout = std::chrono::hours(24));

  EventHub& events() { return events_; }
  SchedulerStats stats() const;
  const Clock& clock() const { return *clock_; }

 private:
  struct Task;

  TaskId submit_locked(adapters::TaskSpec spec, std::vector<adapters::PipelineStep> then, int console,
                       std::optional<TaskId> parent);
  int console_for(const SubmitOptions& options);
  void pump_locked();
  void start_locked(Task& t);
  void run_task(TaskId id);
  void append_console_locked(TaskId id, int console, const std::string& text);
  void finish_waiting_locked(Task& t, TaskState state);
  TaskRow row_locked(const Task& t) const;
  Event base_event(const Task& t, EventType type) const;
  bool subtree_done_locked(TaskId id) const;
  void monitor();

  SchedulerConfig config_;
  std::shared_ptr<Executor> executor_;
  std::shared_ptr<const Clock> clock_;
  adapters::RuleBook rules_;
  EventHub events_;

  mutable std::mutex mu_;
  std::condition_variable changed_;
  std::map<TaskId, std::unique_ptr<Task>> tasks_;
  std::set<std::pair<std::pair<int, std::uint64_t>, TaskId>> queue_;
  std::map<int, std::vector<ConsoleChunk>> consoles_;
  TaskId next_id_ = 1;
  std::uint64_t next_seq_ = 1;
  int next_console_ = 2;
  SchedulerStats stats_;
  int workers_ = 0;
  bool stopping_ = false;
  std::map<TaskId, std::thread> threads_;
  std::set<TaskId> done_threads_;
  std::thread monitor_;
};

}  // namespace anbx::scheduler
