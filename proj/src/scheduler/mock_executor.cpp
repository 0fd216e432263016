#include <algorithm>
#include <thread>

#include "anbx/scheduler/executor.hpp"

namespace anbx::scheduler {

void TaskControl::request_stop() {
  {
    std::lock_guard lock(mu_);
    stop_ = true;
  }
  cv_.notify_all();
}

bool TaskControl::wait_for_stop(std::chrono::milliseconds d) {
  std::unique_lock lock(mu_);
  return cv_.wait_for(lock, d, [&] { return stop_.load(); });
}

MockExecutor::MockExecutor(adapters::MockScript script, std::chrono::milliseconds grace)
    : script_(std::move(script)), grace_(grace) {}

ExecResult MockExecutor::run(const adapters::CommandPlan& plan, TaskControl& control, const OutputSink& sink) {
  auto args = adapters::parse_mock_args(plan.args);
  adapters::MockScript script = script_;
  if (args.script) {
    script = adapters::MockScript::load(*args.script);
  } else if (auto it = plan.env.find("ANBX_MOCK_SCRIPT"); it != plan.env.end()) {
    script = adapters::MockScript::load(it->second);
  }
  script = adapters::apply_mock_args(script, args);
  const std::string& input = args.input;
  auto answer = adapters::plan_mock_run(script, input, args.goal);
  ExecResult r;
  r.spawned = true;
  auto emit = [&](const std::string& s) {
    r.output += s;
    sink(s);
  };
  emit("mock: verifying " + input + "\n");

  auto done = std::chrono::steady_clock::now() + std::chrono::milliseconds(answer.delay_ms);
  bool stopped = control.wait_for_stop(std::chrono::milliseconds(answer.delay_ms));
  if (stopped) {
    if (!script.ignore_term) {
      r.exit_code = 128 + 15;
      r.signaled = true;
      return r;
    }
    // SIGTERM is ignored: keep sleeping until done or forced after the grace.
    auto forced = std::chrono::steady_clock::now() + grace_;
    std::this_thread::sleep_until(std::min(forced, done));
    if (forced <= done) {
      r.exit_code = 128 + 9;
      r.signaled = true;
      return r;
    }
  }
  emit(answer.output);
  r.exit_code = answer.exit_code;
  return r;
}

}  // namespace anbx::scheduler
