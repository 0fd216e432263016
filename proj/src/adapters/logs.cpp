#include "anbx/adapters/logs.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <ctime>

#include "anbx/error.hpp"

namespace anbx::adapters {

namespace fs = std::filesystem;

Timestamp Timestamp::local(std::chrono::system_clock::time_point t) {
  std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  localtime_r(&tt, &tm);
  return Timestamp{tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec};
}

std::string Timestamp::compact() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d%02d%02d-%02d%02d%02d", year, month, day, hour, minute, second);
  return buf;
}

std::string Timestamp::readable() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d %02d:%02d:%02d", year, month, day, hour, minute, second);
  return buf;
}

fs::path format_log_path(const fs::path& root, const std::string& tool, const std::string& protocol,
                         const std::optional<std::string>& export_option, const Timestamp& ts) {
  std::string name = protocol;
  if (export_option && !export_option->empty()) name += "_" + *export_option;
  name += "_" + ts.compact() + ".log";
  return root / tool / name;
}

fs::path log_path(const fs::path& root, const std::string& tool, const std::string& protocol,
                  const std::optional<std::string>& export_option, const Timestamp& ts) {
  fs::path base = format_log_path(root, tool, protocol, export_option, ts);
  std::error_code ec;
  fs::create_directories(base.parent_path(), ec);
  if (ec) throw Error("E-IO", "cannot create " + base.parent_path().string() + ": " + ec.message());

  std::string stem = base.stem().string();
  for (int n = 1; n < 10000; ++n) {
    fs::path candidate = n == 1 ? base : base.parent_path() / (stem + "-" + std::to_string(n) + ".log");
    int fd = ::open(candidate.c_str(), O_WRONLY | O_CREAT | O_EXCL | O_CLOEXEC, 0644);
    if (fd >= 0) {
      ::close(fd);
      return candidate;
    }
    if (errno != EEXIST) throw Error("E-IO", "cannot create " + candidate.string() + ": " + std::strerror(errno));
  }
  throw Error("E-IO", "too many log files named " + base.string());
}

std::string log_header(const std::string& command_line, const Timestamp& start, const std::string& version) {
  return "command: " + command_line + "\nstarted: " + start.readable() +
         "\nversion: " + (version.empty() ? std::string("unknown") : version) + "\n";
}

}  // namespace anbx::adapters
