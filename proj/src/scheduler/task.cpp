#include "anbx/scheduler/task.hpp"

namespace anbx::scheduler {

Priority priority_of(adapters::TaskKind kind) {
  switch (kind) {
    case adapters::TaskKind::Compile: return Priority::P1;
    case adapters::TaskKind::OfmcOneSession: return Priority::P2;
    case adapters::TaskKind::ProVerif: return Priority::P3;
    case adapters::TaskKind::OfmcMultiSession: return Priority::P4;
    case adapters::TaskKind::Generic: return Priority::P3;
  }
  return Priority::P3;
}

bool is_terminal(TaskState s) { return s != TaskState::Waiting && s != TaskState::Running; }

std::string to_string(Priority p) { return "P" + std::to_string(static_cast<int>(p)); }

std::string to_string(TaskState s) {
  switch (s) {
    case TaskState::Waiting: return "Waiting";
    case TaskState::Running: return "Running";
    case TaskState::Finished: return "Finished";
    case TaskState::Killed: return "Killed";
    case TaskState::TimedOut: return "TimedOut";
  }
  return "Waiting";
}

}  // namespace anbx::scheduler
