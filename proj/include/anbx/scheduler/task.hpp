#pragma once

#include <cstdint>
#include <string>

#include "anbx/adapters/pipeline.hpp"

namespace anbx::scheduler {

using TaskId = std::uint64_t;

/// P1 runs first.
enum class Priority { P1 = 1, P2 = 2, P3 = 3, P4 = 4 };

/// Compile P1, one-session OFMC P2, ProVerif and generic P3, multi-session
/// OFMC P4.
Priority priority_of(adapters::TaskKind kind);

enum class TaskState { Waiting, Running, Finished, Killed, TimedOut };

bool is_terminal(TaskState s);

std::string to_string(Priority p);
std::string to_string(TaskState s);

}  // namespace anbx::scheduler
