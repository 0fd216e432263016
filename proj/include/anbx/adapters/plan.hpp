#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace anbx::adapters {

/// One subprocess invocation. Executed directly, never through a shell.
struct CommandPlan {
  std::filesystem::path executable;
  std::vector<std::string> args;
  std::filesystem::path working_dir;
  std::map<std::string, std::string> env;
  std::optional<std::string> stdin_data;
  /// When set, the process's stdout is also written to this file.
  std::optional<std::filesystem::path> stdout_path;

  /// Executable and arguments joined with single spaces.
  std::string command_line() const;

  friend bool operator==(const CommandPlan&, const CommandPlan&) = default;
};

/// One JSON object per plan, keys in fixed order, no whitespace.
std::string encode_plan(const CommandPlan& plan);
CommandPlan decode_plan(std::string_view text);

/// JSON lines: one encoded plan per line, each line ending in '\n'.
std::string encode_plans(const std::vector<CommandPlan>& plans);
std::vector<CommandPlan> decode_plans(std::string_view text);

}  // namespace anbx::adapters
