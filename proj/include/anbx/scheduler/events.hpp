#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "anbx/adapters/classify.hpp"
#include "anbx/adapters/pipeline.hpp"
#include "anbx/scheduler/task.hpp"

namespace anbx::scheduler {

enum class EventType { TaskEnqueued, TaskStarted, OutputChunk, TaskTerminal };

std::string to_string(EventType t);

/// A byte range of a console chunk and the outcome its line indicates.
struct SpanHint {
  std::size_t offset = 0;
  std::size_t length = 0;
  adapters::Outcome outcome = adapters::Outcome::Safe;
};

struct Event {
  std::uint64_t seq = 0;
  EventType type = EventType::TaskEnqueued;
  TaskId task = 0;
  int console = 0;
  Priority priority = Priority::P3;
  adapters::TaskKind kind = adapters::TaskKind::Generic;
  adapters::Tool tool = adapters::Tool::Generic;
  std::string protocol;
  /// The task's goal label and session count, when it has them.
  std::optional<std::string> goal;
  std::optional<int> sessions;
  /// Chunk bytes for OutputChunk; the command line for TaskEnqueued and
  /// TaskStarted.
  std::string text;
  std::vector<SpanHint> hints;
  TaskState state = TaskState::Waiting;
  std::optional<adapters::OutcomeClass> outcome;
  /// Running count (including this task) and cap at TaskStarted.
  int running = 0;
  int max_parallel = 0;
};

/// Ordered, bounded event log with blocking reads and synchronous listeners.
/// Listeners run on the publishing thread, in sequence order, and must not
/// call back into the publisher.
class EventHub {
 public:
  using Listener = std::function<void(const Event&)>;

  explicit EventHub(std::size_t capacity = 200000);

  /// Assigns the next sequence number and returns it.
  std::uint64_t publish(Event e);

  int add_listener(Listener l);
  void remove_listener(int id);

  /// Retained events with seq > after. Waits up to `timeout` for one to
  /// arrive when there are none yet.
  std::vector<Event> since(std::uint64_t after, std::chrono::milliseconds timeout = std::chrono::milliseconds(0)) const;
  std::vector<Event> all() const { return since(0); }

  std::uint64_t last_seq() const;

  /// Wakes blocked readers; later reads return immediately.
  void close();
  bool closed() const;

 private:
  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  std::deque<Event> log_;
  std::size_t capacity_;
  std::uint64_t next_seq_ = 1;
  std::map<int, Listener> listeners_;
  int next_listener_ = 1;
  bool closed_ = false;
};

}  // namespace anbx::scheduler
