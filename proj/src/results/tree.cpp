#include "anbx/results/tree.hpp"

#include <algorithm>
#include <cctype>

namespace anbx::results {

using adapters::Outcome;

int failure_rank(Outcome o) {
  switch (o) {
    case Outcome::Attack: return 0;
    case Outcome::Inconclusive:
    case Outcome::Timeout:
    case Outcome::ToolError: return 1;
    case Outcome::Safe: return 2;
  }
  return 1;
}

bool natural_less(const std::string& a, const std::string& b) {
  std::size_t i = 0, j = 0;
  auto digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
  while (i < a.size() && j < b.size()) {
    if (digit(a[i]) && digit(b[j])) {
      std::size_t ie = i, je = j;
      while (ie < a.size() && digit(a[ie])) ++ie;
      while (je < b.size() && digit(b[je])) ++je;
      // Compare by value: strip leading zeros, then length, then digits.
      std::size_t is = i, js = j;
      while (is + 1 < ie && a[is] == '0') ++is;
      while (js + 1 < je && b[js] == '0') ++js;
      if (ie - is != je - js) return ie - is < je - js;
      int c = a.compare(is, ie - is, b, js, je - js);
      if (c != 0) return c < 0;
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  if ((a.size() - i) != (b.size() - j)) return a.size() - i < b.size() - j;
  return a < b;
}

bool goal_order(const GoalResult& a, const GoalResult& b) {
  int ra = failure_rank(a.status), rb = failure_rank(b.status);
  if (ra != rb) return ra < rb;
  if (a.goal != b.goal) return natural_less(a.goal, b.goal);
  if (a.tool != b.tool) return a.tool < b.tool;
  return a.sessions < b.sessions;
}

void ResultTree::ingest(GoalResult r) {
  auto p = std::find_if(protocols_.begin(), protocols_.end(),
                        [&](const ProtocolResults& x) { return x.protocol == r.protocol; });
  if (p == protocols_.end()) {
    protocols_.push_back(ProtocolResults{r.protocol, {}});
    p = std::prev(protocols_.end());
  }
  auto& goals = p->goals;
  auto same = std::find_if(goals.begin(), goals.end(), [&](const GoalResult& g) {
    return g.goal == r.goal && g.tool == r.tool && g.sessions == r.sessions;
  });
  if (same != goals.end()) goals.erase(same);
  goals.insert(std::upper_bound(goals.begin(), goals.end(), r, goal_order), std::move(r));
}

std::pair<std::string, std::string> result_key(const std::string& protocol, const std::optional<std::string>& goal) {
  std::string name = protocol;
  std::optional<std::string> label = goal;
  if (auto from_name = adapters::goal_label_from_name(protocol)) {
    name = protocol.substr(0, protocol.rfind("_goal"));
    if (!label) label = from_name;
  }
  return {name, label.value_or(kAllGoals)};
}

std::optional<GoalResult> ResultTree::apply(const scheduler::Event& e, std::chrono::system_clock::time_point now) {
  if (e.type != scheduler::EventType::TaskTerminal || !e.outcome) return std::nullopt;
  if (e.tool != adapters::Tool::Ofmc && e.tool != adapters::Tool::ProVerif) return std::nullopt;
  auto [protocol, goal] = result_key(e.protocol, e.goal ? e.goal : e.outcome->goal_name);
  GoalResult r{protocol, goal, e.outcome->outcome, e.sessions ? e.sessions : e.outcome->sessions,
               adapters::to_string(e.tool), now};
  ingest(r);
  return r;
}

std::vector<ProtocolResults> ResultTree::ordered_view(bool alphabetical) const {
  auto view = protocols_;
  if (alphabetical)
    std::stable_sort(view.begin(), view.end(),
                     [](const ProtocolResults& a, const ProtocolResults& b) { return a.protocol < b.protocol; });
  return view;
}

std::size_t ResultTree::size() const {
  std::size_t n = 0;
  for (const auto& p : protocols_) n += p.goals.size();
  return n;
}

ResultAggregator::ResultAggregator(scheduler::EventHub& hub) : hub_(hub) {
  listener_ = hub_.add_listener([this](const scheduler::Event& e) {
    std::lock_guard lock(mu_);
    tree_.apply(e);
  });
}

ResultAggregator::~ResultAggregator() { hub_.remove_listener(listener_); }

ResultTree ResultAggregator::snapshot() const {
  std::lock_guard lock(mu_);
  return tree_;
}

void ResultAggregator::clear() {
  std::lock_guard lock(mu_);
  tree_.clear();
}

}  // namespace anbx::results
