#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <functional>
#include <mutex>
#include <string>
#include <string_view>

#include "anbx/adapters/mock.hpp"
#include "anbx/adapters/plan.hpp"

namespace anbx::scheduler {

/// Stop request shared between the scheduler and a running execution.
class TaskControl {
 public:
  void request_stop();
  bool stop_requested() const { return stop_.load(); }
  /// Sleeps up to `d`; returns true early if a stop was requested.
  bool wait_for_stop(std::chrono::milliseconds d);

 private:
  std::atomic<bool> stop_{false};
  std::mutex mu_;
  std::condition_variable cv_;
};

struct ExecResult {
  bool spawned = false;
  /// Exit status, or 128 + signal number when killed by a signal.
  int exit_code = -1;
  bool signaled = false;
  /// stdout followed in arrival order by stderr, as delivered to the sink.
  std::string output;
  /// Why the process could not be started.
  std::string error;
};

using OutputSink = std::function<void(std::string_view)>;

class Executor {
 public:
  virtual ~Executor() = default;
  /// Runs the plan to completion. On a stop request the execution is asked
  /// to terminate politely and forced after the grace period.
  virtual ExecResult run(const adapters::CommandPlan& plan, TaskControl& control, const OutputSink& sink) = 0;
};

/// Real subprocesses, each in its own process group. Termination goes to
/// the whole group: SIGTERM, then SIGKILL after the grace period.
class ProcessExecutor final : public Executor {
 public:
  explicit ProcessExecutor(std::chrono::milliseconds grace = std::chrono::seconds(2));
  ExecResult run(const adapters::CommandPlan& plan, TaskControl& control, const OutputSink& sink) override;

 private:
  std::chrono::milliseconds grace_;
};

/// In-process stand-in for the mock verifier binary: reads the plan's
/// arguments like the binary does (see parse_mock_args) and answers from
/// the given script, or from --script / the plan's ANBX_MOCK_SCRIPT when
/// present. Honours stop requests like a process would, including
/// ignore_term.
class MockExecutor final : public Executor {
 public:
  explicit MockExecutor(adapters::MockScript script, std::chrono::milliseconds grace = std::chrono::seconds(2));
  ExecResult run(const adapters::CommandPlan& plan, TaskControl& control, const OutputSink& sink) override;

 private:
  adapters::MockScript script_;
  std::chrono::milliseconds grace_;
};

}  // namespace anbx::scheduler
