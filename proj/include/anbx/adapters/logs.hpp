#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>

namespace anbx::adapters {

/// Broken-down local time used in log file names.
struct Timestamp {
  int year = 1970, month = 1, day = 1, hour = 0, minute = 0, second = 0;

  static Timestamp local(std::chrono::system_clock::time_point t);
  /// "YYYYMMDD-HHMMSS"
  std::string compact() const;
  /// "YYYY-MM-DD HH:MM:SS"
  std::string readable() const;
};

/// "<root>/<tool>/<protocol>[_<export>]_<YYYYMMDD-HHMMSS>.log" without
/// touching the file system.
std::filesystem::path format_log_path(const std::filesystem::path& root, const std::string& tool,
                                      const std::string& protocol, const std::optional<std::string>& export_option,
                                      const Timestamp& ts);

/// Creates the directories and reserves a fresh, empty log file. If the
/// name is taken, "-2", "-3", ... is appended before ".log".
/// Throws anbx::Error E-IO if the file cannot be created.
std::filesystem::path log_path(const std::filesystem::path& root, const std::string& tool,
                               const std::string& protocol, const std::optional<std::string>& export_option,
                               const Timestamp& ts);

/// Three header lines: the command line, the start time, the tool version
/// ("unknown" when empty).
std::string log_header(const std::string& command_line, const Timestamp& start, const std::string& version);

}  // namespace anbx::adapters
