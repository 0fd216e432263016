#include "anbx/scheduler/scheduler.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "anbx/adapters/logs.hpp"
#include "anbx/error.hpp"

namespace anbx::scheduler {

using adapters::Outcome;
using adapters::OutcomeClass;

int default_max_parallel() {
  unsigned cores = std::thread::hardware_concurrency();
  return static_cast<int>(std::clamp(cores, 1u, 4u));
}

struct Scheduler::Task {
  TaskId id = 0;
  std::uint64_t seq = 0;
  adapters::TaskSpec spec;
  std::vector<adapters::PipelineStep> then;
  int console = 1;
  std::optional<TaskId> parent;
  std::vector<TaskId> children;
  Priority priority = Priority::P3;
  TaskState state = TaskState::Waiting;
  std::optional<Clock::time_point> start;
  std::optional<Clock::time_point> end;
  std::optional<OutcomeClass> outcome;
  std::optional<int> exit_code;
  std::string output;
  std::shared_ptr<TaskControl> control = std::make_shared<TaskControl>();
  bool kill_requested = false;
  bool timeout_requested = false;
  std::optional<std::filesystem::path> log_file;
};

namespace {

std::string seconds_text(double s) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(1);
  out << s << " s";
  return out.str();
}

Event base_event_for(TaskId id, int console, Priority priority, const adapters::TaskSpec& spec, EventType type) {
  Event e;
  e.type = type;
  e.task = id;
  e.console = console;
  e.priority = priority;
  e.kind = spec.kind;
  e.tool = spec.tool;
  e.protocol = spec.protocol;
  e.goal = spec.goal;
  e.sessions = spec.sessions;
  return e;
}

double seconds_between(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

}  // namespace

Event Scheduler::base_event(const Task& t, EventType type) const {
  return base_event_for(t.id, t.console, t.priority, t.spec, type);
}

Scheduler::Scheduler(SchedulerConfig config, std::shared_ptr<Executor> executor, std::shared_ptr<const Clock> clock,
                     adapters::RuleBook rules)
    : config_(std::move(config)), executor_(std::move(executor)), clock_(std::move(clock)), rules_(std::move(rules)) {
  if (config_.max_parallel < 1) throw Error("E-BADN", "max parallel tasks must be at least 1");
  if (config_.timeout_minutes < 0) throw Error("E-BADN", "timeout must not be negative");
  monitor_ = std::thread([this] { monitor(); });
}

Scheduler::~Scheduler() {
  std::vector<std::thread> threads;
  {
    std::unique_lock lock(mu_);
    stopping_ = true;
    for (auto& [id, t] : tasks_) {
      if (t->state == TaskState::Running) {
        t->kill_requested = true;
        t->control->request_stop();
      }
    }
    changed_.notify_all();
    changed_.wait(lock, [&] { return workers_ == 0; });
    for (auto& [id, th] : threads_) threads.push_back(std::move(th));
    threads_.clear();
  }
  for (auto& th : threads)
    if (th.joinable()) th.join();
  if (monitor_.joinable()) monitor_.join();
  events_.close();
}

TaskId Scheduler::submit(adapters::TaskKind kind, adapters::CommandPlan plan) {
  adapters::TaskSpec spec;
  spec.kind = kind;
  spec.plan = std::move(plan);
  return submit(std::move(spec));
}

TaskId Scheduler::submit(adapters::TaskSpec spec, const SubmitOptions& options) {
  std::lock_guard lock(mu_);
  TaskId id = submit_locked(std::move(spec), {}, console_for(options), std::nullopt);
  pump_locked();
  return id;
}

TaskId Scheduler::submit_pipeline(adapters::PipelineStep root, const SubmitOptions& options) {
  std::lock_guard lock(mu_);
  TaskId id = submit_locked(std::move(root.task), std::move(root.then), console_for(options), std::nullopt);
  pump_locked();
  return id;
}

int Scheduler::console_for(const SubmitOptions& options) {
  if (options.console) {
    consoles_[*options.console];
    next_console_ = std::max(next_console_, *options.console + 1);
    return *options.console;
  }
  if (options.new_console) {
    int id = next_console_++;
    consoles_[id];
    return id;
  }
  consoles_[1];
  return 1;
}

int Scheduler::new_console() {
  std::lock_guard lock(mu_);
  return console_for(SubmitOptions{std::nullopt, true});
}

TaskId Scheduler::submit_locked(adapters::TaskSpec spec, std::vector<adapters::PipelineStep> then, int console,
                                std::optional<TaskId> parent) {
  auto t = std::make_unique<Task>();
  t->id = next_id_++;
  t->seq = next_seq_++;
  t->priority = priority_of(spec.kind);
  t->spec = std::move(spec);
  t->then = std::move(then);
  t->console = console;
  t->parent = parent;
  if (parent) tasks_.at(*parent)->children.push_back(t->id);

  Event e = base_event(*t, EventType::TaskEnqueued);
  e.text = t->spec.plan.command_line();
  e.state = TaskState::Waiting;
  events_.publish(std::move(e));

  queue_.insert({{static_cast<int>(t->priority), t->seq}, t->id});
  TaskId id = t->id;
  tasks_[id] = std::move(t);
  changed_.notify_all();
  return id;
}

void Scheduler::pump_locked() {
  while (!stopping_ && stats_.running < config_.max_parallel && !queue_.empty()) {
    TaskId id = queue_.begin()->second;
    queue_.erase(queue_.begin());
    start_locked(*tasks_.at(id));
  }
}

void Scheduler::start_locked(Task& t) {
  for (auto it = threads_.begin(); it != threads_.end();) {
    if (tasks_.at(it->first)->state != TaskState::Running && it->second.joinable() && done_threads_.count(it->first)) {
      it->second.join();
      done_threads_.erase(it->first);
      it = threads_.erase(it);
    } else {
      ++it;
    }
  }

  t.state = TaskState::Running;
  t.start = clock_->now();
  ++stats_.running;
  ++stats_.started;
  stats_.peak_running = std::max(stats_.peak_running, stats_.running);

  Event e = base_event(t, EventType::TaskStarted);
  e.text = t.spec.plan.command_line();
  e.state = TaskState::Running;
  e.running = stats_.running;
  e.max_parallel = config_.max_parallel;
  events_.publish(std::move(e));

  ++workers_;
  threads_[t.id] = std::thread([this, id = t.id] { run_task(id); });
}

void Scheduler::append_console_locked(TaskId id, int console, const std::string& text) {
  const Task& t = *tasks_.at(id);
  ConsoleChunk chunk{id, text, {}};
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::size_t end = nl == std::string::npos ? text.size() : nl;
    if (auto o = adapters::classify_line(t.spec.tool, text.substr(pos, end - pos), rules_))
      chunk.hints.push_back(SpanHint{pos, end - pos, *o});
    pos = end + 1;
  }
  Event e = base_event(t, EventType::OutputChunk);
  e.console = console;
  e.state = t.state;
  e.text = text;
  e.hints = chunk.hints;
  events_.publish(std::move(e));
  consoles_[console].push_back(std::move(chunk));
}

void Scheduler::run_task(TaskId id) {
  adapters::TaskSpec spec;
  std::shared_ptr<TaskControl> control;
  int console = 1;
  {
    std::lock_guard lock(mu_);
    const Task& t = *tasks_.at(id);
    spec = t.spec;
    control = t.control;
    console = t.console;
  }

  std::ofstream log;
  if (config_.log_root) {
    std::string protocol = spec.protocol;
    if (protocol.empty())
      protocol = spec.plan.args.empty() ? "task" + std::to_string(id)
                                        : std::filesystem::path(spec.plan.args.front()).stem().string();
    std::string tool = adapters::to_string(spec.tool);
    auto ts = adapters::Timestamp::local(std::chrono::system_clock::now());
    try {
      auto path = adapters::log_path(*config_.log_root, tool, protocol, spec.export_option, ts);
      log.open(path, std::ios::binary | std::ios::app);
      auto v = config_.tool_versions.find(tool);
      log << adapters::log_header(spec.plan.command_line(), ts, v == config_.tool_versions.end() ? "" : v->second);
      std::lock_guard lock(mu_);
      tasks_.at(id)->log_file = path;
    } catch (const Error& e) {
      std::lock_guard lock(mu_);
      append_console_locked(id, console, std::string("log: ") + e.what() + "\n");
    }
  }

  std::string pending;
  auto sink = [&](std::string_view chunk) {
    if (log.is_open()) log.write(chunk.data(), static_cast<std::streamsize>(chunk.size()));
    pending.append(chunk);
    auto nl = pending.rfind('\n');
    if (nl == std::string::npos) return;
    std::string lines = pending.substr(0, nl + 1);
    pending.erase(0, nl + 1);
    std::lock_guard lock(mu_);
    append_console_locked(id, console, lines);
  };

  ExecResult res;
  try {
    res = executor_->run(spec.plan, *control, sink);
  } catch (const std::exception& e) {
    res.spawned = false;
    res.error = e.what();
  }

  OutcomeClass cls;
  if (res.spawned) {
    std::string hint = spec.plan.args.empty() ? std::string() : spec.plan.args.front();
    cls = adapters::classify_output(spec.tool, res.output, res.exit_code, rules_, hint);
  } else {
    cls.outcome = Outcome::ToolError;
    cls.excerpt = res.error;
  }
  if (spec.goal) cls.goal_name = spec.goal;
  cls.sessions = spec.sessions;

  std::lock_guard lock(mu_);
  Task& t = *tasks_.at(id);
  if (!pending.empty()) append_console_locked(id, console, pending + "\n");
  if (!res.spawned) append_console_locked(id, console, "error: " + res.error + "\n");
  t.end = clock_->now();
  t.exit_code = res.exit_code;
  t.output = std::move(res.output);
  double runtime = seconds_between(*t.start, *t.end);
  if (t.timeout_requested) {
    t.state = TaskState::TimedOut;
    t.outcome = OutcomeClass{Outcome::Timeout, cls.goal_name, cls.sessions, ""};
    append_console_locked(id, console, "[timed out after " + seconds_text(runtime) + "]\n");
  } else if (t.kill_requested) {
    t.state = TaskState::Killed;
    append_console_locked(id, console, "[killed after " + seconds_text(runtime) + "]\n");
  } else {
    t.state = TaskState::Finished;
    t.outcome = cls;
  }
  if (log.is_open()) {
    log << "\nresult: " << to_string(t.state);
    if (t.outcome) log << " " << adapters::to_string(t.outcome->outcome);
    log << " (exit " << t.exit_code.value_or(-1) << ", " << seconds_text(runtime) << ")\n";
    log.close();
  }
  --stats_.running;
  ++stats_.ended;

  Event e = base_event(t, EventType::TaskTerminal);
  e.state = t.state;
  e.outcome = t.outcome;
  events_.publish(std::move(e));

  if (t.state == TaskState::Finished && !stopping_) {
    auto then = std::move(t.then);
    for (auto& step : then) {
      if (!adapters::condition_holds(step.condition, t.outcome->outcome, *t.exit_code)) continue;
      if (step.feed_previous_output) step.task.plan.stdin_data = t.output;
      submit_locked(std::move(step.task), std::move(step.then), console, id);
    }
  }
  pump_locked();
  --workers_;
  done_threads_.insert(id);
  changed_.notify_all();
}

void Scheduler::finish_waiting_locked(Task& t, TaskState state) {
  t.state = state;
  t.start = t.end = clock_->now();
  append_console_locked(t.id, t.console, "[killed before start]\n");
  Event e = base_event(t, EventType::TaskTerminal);
  e.state = state;
  events_.publish(std::move(e));
}

void Scheduler::set_max_parallel(int n) {
  if (n < 1) throw Error("E-BADN", "max parallel tasks must be at least 1, got " + std::to_string(n));
  std::lock_guard lock(mu_);
  config_.max_parallel = n;
  pump_locked();
  changed_.notify_all();
}

int Scheduler::max_parallel() const {
  std::lock_guard lock(mu_);
  return config_.max_parallel;
}

void Scheduler::set_timeout_minutes(int minutes) {
  if (minutes < 0) throw Error("E-BADN", "timeout must not be negative, got " + std::to_string(minutes));
  std::lock_guard lock(mu_);
  config_.timeout_minutes = minutes;
}

int Scheduler::timeout_minutes() const {
  std::lock_guard lock(mu_);
  return config_.timeout_minutes;
}

void Scheduler::kill(const std::set<TaskId>& ids) {
  std::lock_guard lock(mu_);
  for (TaskId id : ids)
    if (!tasks_.count(id)) throw Error("E-NOTASK", "no task with id " + std::to_string(id));
  for (TaskId id : ids) {
    Task& t = *tasks_.at(id);
    if (t.state == TaskState::Waiting) {
      queue_.erase({{static_cast<int>(t.priority), t.seq}, t.id});
      finish_waiting_locked(t, TaskState::Killed);
    } else if (t.state == TaskState::Running && !t.kill_requested && !t.timeout_requested) {
      t.kill_requested = true;
      t.control->request_stop();
    }
  }
  changed_.notify_all();
}

void Scheduler::kill_all() {
  std::set<TaskId> ids;
  {
    std::lock_guard lock(mu_);
    for (const auto& [id, t] : tasks_)
      if (!is_terminal(t->state)) ids.insert(id);
  }
  kill(ids);
}

void Scheduler::enforce_timeout() {
  std::lock_guard lock(mu_);
  if (config_.timeout_minutes <= 0) return;
  auto limit = config_.minute_length * config_.timeout_minutes;
  auto now = clock_->now();
  for (auto& [id, t] : tasks_) {
    if (t->state != TaskState::Running || t->kill_requested || t->timeout_requested) continue;
    if (now - *t->start >= limit) {
      t->timeout_requested = true;
      t->control->request_stop();
    }
  }
}

void Scheduler::monitor() {
  for (;;) {
    {
      std::unique_lock lock(mu_);
      if (changed_.wait_for(lock, config_.timeout_poll, [&] { return stopping_; })) return;
    }
    enforce_timeout();
  }
}

TaskRow Scheduler::row_locked(const Task& t) const {
  TaskRow r;
  r.id = t.id;
  r.enqueue_seq = t.seq;
  r.console = t.console;
  r.kind = t.spec.kind;
  r.priority = t.priority;
  r.state = t.state;
  r.waiting = t.state == TaskState::Waiting;
  if (t.start) r.runtime_seconds = seconds_between(*t.start, t.end.value_or(clock_->now()));
  r.command_line = t.spec.plan.command_line();
  r.protocol = t.spec.protocol;
  r.goal = t.spec.goal;
  r.sessions = t.spec.sessions;
  r.outcome = t.outcome;
  r.exit_code = t.exit_code;
  r.parent = t.parent;
  r.log_file = t.log_file;
  return r;
}

std::vector<TaskRow> Scheduler::snapshot() const {
  std::lock_guard lock(mu_);
  std::vector<TaskRow> rows;
  for (const auto& [id, t] : tasks_) rows.push_back(row_locked(*t));
  std::sort(rows.begin(), rows.end(), [](const TaskRow& a, const TaskRow& b) { return a.enqueue_seq < b.enqueue_seq; });
  return rows;
}

std::optional<TaskResult> Scheduler::result(TaskId id) const {
  std::lock_guard lock(mu_);
  auto it = tasks_.find(id);
  if (it == tasks_.end()) return std::nullopt;
  return TaskResult{row_locked(*it->second), it->second->output};
}

std::vector<TaskId> Scheduler::children(TaskId id) const {
  std::lock_guard lock(mu_);
  auto it = tasks_.find(id);
  if (it == tasks_.end()) throw Error("E-NOTASK", "no task with id " + std::to_string(id));
  return it->second->children;
}

std::vector<int> Scheduler::consoles() const {
  std::lock_guard lock(mu_);
  std::vector<int> ids;
  for (const auto& [id, chunks] : consoles_) ids.push_back(id);
  return ids;
}

std::vector<ConsoleChunk> Scheduler::console(int id) const {
  std::lock_guard lock(mu_);
  auto it = consoles_.find(id);
  return it == consoles_.end() ? std::vector<ConsoleChunk>{} : it->second;
}

bool Scheduler::wait_idle(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mu_);
  return changed_.wait_for(lock, timeout, [&] { return queue_.empty() && stats_.running == 0; });
}

bool Scheduler::subtree_done_locked(TaskId id) const {
  const Task& t = *tasks_.at(id);
  if (!is_terminal(t.state)) return false;
  return std::all_of(t.children.begin(), t.children.end(), [&](TaskId c) { return subtree_done_locked(c); });
}

bool Scheduler::wait(TaskId id, std::chrono::milliseconds timeout) {
  std::unique_lock lock(mu_);
  if (!tasks_.count(id)) throw Error("E-NOTASK", "no task with id " + std::to_string(id));
  return changed_.wait_for(lock, timeout, [&] { return subtree_done_locked(id); });
}

SchedulerStats Scheduler::stats() const {
  std::lock_guard lock(mu_);
  return stats_;
}

}  // namespace anbx::scheduler
