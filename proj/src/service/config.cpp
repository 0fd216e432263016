#include "anbx/service/config.hpp"

#include <sys/stat.h>
#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "anbx/error.hpp"
#include "anbx/scheduler/executor.hpp"

namespace anbx::service {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw Error("E-CONFIG", "config: '" + key + "' needs true or false, got '" + v + "'");
}

int parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    int n = std::stoi(v, &used);
    if (used == v.size()) return n;
  } catch (const std::exception&) {
  }
  throw Error("E-CONFIG", "config: '" + key + "' needs an integer, got '" + v + "'");
}

std::optional<fs::path> opt_path(const std::string& v) {
  if (v.empty()) return std::nullopt;
  return fs::path(v);
}

struct PathKey {
  const char* key;
  std::optional<fs::path> WorkbenchConfig::*field;
};

const PathKey kPathKeys[] = {
    {"anbxc", &WorkbenchConfig::anbxc_path},
    {"ofmc", &WorkbenchConfig::ofmc_path},
    {"proverif", &WorkbenchConfig::proverif_path},
    {"anbxc-config", &WorkbenchConfig::anbxc_config_path},
    {"log-root", &WorkbenchConfig::log_root},
    {"mock", &WorkbenchConfig::mock_path},
    {"mock-script", &WorkbenchConfig::mock_script},
};

enum class PathKind { Executable, ConfigFile, Directory };

struct Perms {
  bool r = false, w = false, x = false;
};

Perms effective_perms(const struct stat& st) {
  unsigned shift = 0;
  if (st.st_uid == ::geteuid()) {
    shift = 6;
  } else if (st.st_gid == ::getegid()) {
    shift = 3;
  }
  unsigned bits = (st.st_mode >> shift) & 7u;
  return Perms{(bits & 4u) != 0, (bits & 2u) != 0, (bits & 1u) != 0};
}

void check_path(std::vector<ConfigIssue>& out, const std::string& key, const fs::path& p, PathKind kind,
                bool permissions) {
  const std::string need = kind == PathKind::Executable ? "rx" : kind == PathKind::ConfigFile ? "rw" : "rwx";
  auto issue = [&](const std::string& code, const std::string& msg) {
    out.push_back(ConfigIssue{code, key, p, need, msg});
  };
  struct stat st {};
  if (::stat(p.c_str(), &st) != 0) {
    issue("E-PATH-MISSING", key + ": " + p.string() + " does not exist");
    return;
  }
  bool is_dir = S_ISDIR(st.st_mode);
  bool is_file = S_ISREG(st.st_mode);
  if (kind == PathKind::Directory ? !is_dir : !is_file) {
    issue("E-PATH-TYPE", key + ": " + p.string() + (kind == PathKind::Directory ? " is not a directory" : " is not a regular file"));
    return;
  }
  if (!permissions) return;
  Perms have = effective_perms(st);
  if (need.find('r') != std::string::npos && !have.r) issue("E-PERM-READ", key + ": " + p.string() + " is not readable");
  if (need.find('w') != std::string::npos && !have.w) issue("E-PERM-WRITE", key + ": " + p.string() + " is not writable");
  if (need.find('x') != std::string::npos && !have.x)
    issue("E-PERM-EXEC", key + ": " + p.string() + (kind == PathKind::Directory ? " cannot be traversed" : " is not executable"));
}

}  // namespace

WorkbenchConfig parse_config(const std::string& text) {
  WorkbenchConfig cfg;
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos) throw Error("E-CONFIG", "config line " + std::to_string(n) + ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    bool known = false;
    for (const auto& pk : kPathKeys) {
      if (key == pk.key) {
        cfg.*pk.field = opt_path(value);
        known = true;
      }
    }
    if (known) continue;
    if (key == "permission-checks") {
      cfg.permission_checks = parse_bool(key, value);
    } else if (key == "console-colors") {
      cfg.console_colors = parse_bool(key, value);
    } else if (key == "max-parallel") {
      cfg.max_parallel = parse_int(key, value);
    } else if (key == "timeout-minutes") {
      cfg.timeout_minutes = parse_int(key, value);
    } else {
      throw Error("E-CONFIG", "config line " + std::to_string(n) + ": unknown key '" + key + "'");
    }
  }
  return cfg;
}

std::string serialize_config(const WorkbenchConfig& cfg) {
  std::string out;
  for (const auto& pk : kPathKeys) {
    const auto& v = cfg.*pk.field;
    out += std::string(pk.key) + " = " + (v ? v->string() : "") + "\n";
  }
  out += std::string("permission-checks = ") + (cfg.permission_checks ? "true" : "false") + "\n";
  out += std::string("console-colors = ") + (cfg.console_colors ? "true" : "false") + "\n";
  out += "max-parallel = " + std::to_string(cfg.max_parallel) + "\n";
  out += "timeout-minutes = " + std::to_string(cfg.timeout_minutes) + "\n";
  return out;
}

fs::path default_config_path() {
  if (const char* p = std::getenv("ANBX_WORKBENCH_CONFIG"); p && *p) return p;
  if (const char* x = std::getenv("XDG_CONFIG_HOME"); x && *x) return fs::path(x) / "anbx-workbench" / "config";
  const char* home = std::getenv("HOME");
  return fs::path(home && *home ? home : ".") / ".config" / "anbx-workbench" / "config";
}

WorkbenchConfig load_config(const fs::path& path) {
  std::error_code ec;
  if (!fs::exists(path, ec)) return WorkbenchConfig{};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("E-IO", "cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void save_config(const WorkbenchConfig& cfg, const fs::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("E-IO", "cannot write " + path.string());
  out << serialize_config(cfg);
  if (!out.flush()) throw Error("E-IO", "cannot write " + path.string());
}

std::vector<ConfigIssue> validate_config(const WorkbenchConfig& cfg) {
  std::vector<ConfigIssue> out;
  const bool perms = cfg.permission_checks;
  const std::pair<const char*, const std::optional<fs::path>*> exes[] = {
      {"anbxc", &cfg.anbxc_path}, {"ofmc", &cfg.ofmc_path}, {"proverif", &cfg.proverif_path}, {"mock", &cfg.mock_path}};
  for (const auto& [key, path] : exes)
    if (*path) check_path(out, key, **path, PathKind::Executable, perms);
  if (cfg.anbxc_config_path) check_path(out, "anbxc-config", *cfg.anbxc_config_path, PathKind::ConfigFile, perms);
  if (cfg.mock_script) check_path(out, "mock-script", *cfg.mock_script, PathKind::ConfigFile, perms);
  if (cfg.log_root) check_path(out, "log-root", *cfg.log_root, PathKind::Directory, perms);
  if (cfg.max_parallel < 0)
    out.push_back(ConfigIssue{"E-LIMIT", "max-parallel", {}, "", "max-parallel must be at least 1 (0 for the default)"});
  if (cfg.timeout_minutes < 0)
    out.push_back(ConfigIssue{"E-LIMIT", "timeout-minutes", {}, "", "timeout-minutes must not be negative"});
  return out;
}

const std::vector<HelpLink>& help_links() {
  static const std::vector<HelpLink> links{
      {"AnBx compiler and IDE", "https://www.dais.unive.it/~modesti/anbx/"},
      {"AnBx IDE documentation", "https://www.dais.unive.it/~modesti/anbx/ide/"},
      {"AnBx tutorial", "https://paolo.science/anbxtutorial/"},
      {"ProVerif", "https://bblanche.gitlabpages.inria.fr/proverif/"},
  };
  return links;
}

std::string probe_version(const fs::path& exe, const std::string& flag, std::chrono::milliseconds limit) {
  scheduler::ProcessExecutor executor(std::chrono::milliseconds(200));
  scheduler::TaskControl control;
  adapters::CommandPlan plan{exe, {flag}, {}, {}, {}, {}};
  std::thread watchdog([&] {
    if (!control.wait_for_stop(limit)) control.request_stop();
  });
  auto r = executor.run(plan, control, [](std::string_view) {});
  control.request_stop();
  watchdog.join();
  if (!r.spawned || r.signaled || r.exit_code != 0) return "unknown";
  std::istringstream in(r.output);
  std::string line;
  while (std::getline(in, line))
    if (!trim(line).empty()) return trim(line);
  return "unknown";
}

}  // namespace anbx::service
