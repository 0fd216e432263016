#include "anbx/scheduler/events.hpp"

namespace anbx::scheduler {

std::string to_string(EventType t) {
  switch (t) {
    case EventType::TaskEnqueued: return "task-enqueued";
    case EventType::TaskStarted: return "task-started";
    case EventType::OutputChunk: return "output-chunk";
    case EventType::TaskTerminal: return "task-terminal";
  }
  return "task-enqueued";
}

EventHub::EventHub(std::size_t capacity) : capacity_(capacity == 0 ? 1 : capacity) {}

std::uint64_t EventHub::publish(Event e) {
  std::lock_guard lock(mu_);
  e.seq = next_seq_++;
  for (const auto& [id, listener] : listeners_) listener(e);
  log_.push_back(std::move(e));
  if (log_.size() > capacity_) log_.pop_front();
  cv_.notify_all();
  return log_.back().seq;
}

int EventHub::add_listener(Listener l) {
  std::lock_guard lock(mu_);
  listeners_[next_listener_] = std::move(l);
  return next_listener_++;
}

void EventHub::remove_listener(int id) {
  std::lock_guard lock(mu_);
  listeners_.erase(id);
}

std::vector<Event> EventHub::since(std::uint64_t after, std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mu_);
  cv_.wait_for(lock, timeout, [&] { return closed_ || next_seq_ - 1 > after; });
  std::vector<Event> out;
  for (auto it = log_.rbegin(); it != log_.rend() && it->seq > after; ++it) out.push_back(*it);
  return {out.rbegin(), out.rend()};
}

std::uint64_t EventHub::last_seq() const {
  std::lock_guard lock(mu_);
  return next_seq_ - 1;
}

void EventHub::close() {
  std::lock_guard lock(mu_);
  closed_ = true;
  cv_.notify_all();
}

bool EventHub::closed() const {
  std::lock_guard lock(mu_);
  return closed_;
}

}  // namespace anbx::scheduler
