#pragma once

#include <chrono>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "anbx/adapters/classify.hpp"
#include "anbx/scheduler/events.hpp"

namespace anbx::results {

/// Goal label of an all-goals run.
inline const std::string kAllGoals = "(all)";

struct GoalResult {
  std::string protocol;
  std::string goal;
  adapters::Outcome status = adapters::Outcome::Inconclusive;
  std::optional<int> sessions;
  std::string tool;
  std::chrono::system_clock::time_point updated_at{};

  friend bool operator==(const GoalResult&, const GoalResult&) = default;
};

/// 0 for Attack, 1 for Inconclusive, Timeout and ToolError, 2 for Safe.
int failure_rank(adapters::Outcome o);

/// Label order with digit runs compared by value, so "g2" < "g10".
bool natural_less(const std::string& a, const std::string& b);

/// Failing-first order inside one protocol: failure rank, then goal label,
/// then tool and sessions.
bool goal_order(const GoalResult& a, const GoalResult& b);

struct ProtocolResults {
  std::string protocol;
  std::vector<GoalResult> goals;

  friend bool operator==(const ProtocolResults&, const ProtocolResults&) = default;
};

/// Per-protocol goal verdicts. A result replaces an earlier one with the
/// same (protocol, goal, tool, sessions).
class ResultTree {
 public:
  void ingest(GoalResult r);
  /// Ingests the verdict of a terminal OFMC or ProVerif task; other events
  /// are ignored. Returns the row that was stored.
  std::optional<GoalResult> apply(const scheduler::Event& e,
                                  std::chrono::system_clock::time_point now = std::chrono::system_clock::now());

  /// Protocols in first-ingest order, or sorted by name.
  std::vector<ProtocolResults> ordered_view(bool alphabetical = false) const;
  std::size_t size() const;
  bool empty() const { return protocols_.empty(); }
  void clear() { protocols_.clear(); }

  friend bool operator==(const ResultTree&, const ResultTree&) = default;

 private:
  std::vector<ProtocolResults> protocols_;
};

/// Protocol name and goal label for a task: a "<p>_goal<i>" name is split
/// into p and "g<i>"; without a goal the label is "(all)".
std::pair<std::string, std::string> result_key(const std::string& protocol, const std::optional<std::string>& goal);

/// A ResultTree fed from an event hub, safe to read from any thread.
class ResultAggregator {
 public:
  explicit ResultAggregator(scheduler::EventHub& hub);
  ~ResultAggregator();
  ResultAggregator(const ResultAggregator&) = delete;
  ResultAggregator& operator=(const ResultAggregator&) = delete;

  ResultTree snapshot() const;
  void clear();

 private:
  scheduler::EventHub& hub_;
  int listener_ = 0;
  mutable std::mutex mu_;
  ResultTree tree_;
};

}  // namespace anbx::results
