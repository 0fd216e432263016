#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace anbx::service {

struct WorkbenchConfig {
  std::optional<std::filesystem::path> anbxc_path;
  std::optional<std::filesystem::path> ofmc_path;
  std::optional<std::filesystem::path> proverif_path;
  std::optional<std::filesystem::path> anbxc_config_path;
  std::optional<std::filesystem::path> log_root;
  /// The mock verifier binary and its script, for tool "mock".
  std::optional<std::filesystem::path> mock_path;
  std::optional<std::filesystem::path> mock_script;
  bool permission_checks = true;
  bool console_colors = true;
  int max_parallel = 0;  ///< 0 means the scheduler default
  int timeout_minutes = 0;

  friend bool operator==(const WorkbenchConfig&, const WorkbenchConfig&) = default;
};

/// "key = value" lines, '#' comments. Keys: anbxc, ofmc, proverif,
/// anbxc-config, log-root, mock, mock-script, permission-checks,
/// console-colors, max-parallel, timeout-minutes. Empty values unset paths.
/// Throws anbx::Error E-CONFIG on unknown keys or bad values.
WorkbenchConfig parse_config(const std::string& text);
std::string serialize_config(const WorkbenchConfig& cfg);

/// ANBX_WORKBENCH_CONFIG if set, else $XDG_CONFIG_HOME/anbx-workbench/config,
/// else ~/.config/anbx-workbench/config.
std::filesystem::path default_config_path();

/// A missing file yields the defaults. Errors: E-CONFIG, E-IO.
WorkbenchConfig load_config(const std::filesystem::path& path);
/// Creates parent directories. Errors: E-IO.
void save_config(const WorkbenchConfig& cfg, const std::filesystem::path& path);

struct ConfigIssue {
  /// E-PATH-MISSING, E-PATH-TYPE, E-PERM-READ, E-PERM-WRITE, E-PERM-EXEC or
  /// E-LIMIT.
  std::string code;
  /// Config key the issue is about.
  std::string key;
  std::filesystem::path path;
  /// Permissions the path needs, e.g. "rx".
  std::string required_permissions;
  std::string message;

  friend bool operator==(const ConfigIssue&, const ConfigIssue&) = default;
};

/// One issue per violation. Executables need r and x, configuration files
/// r and w, directories r, w and x. Permissions are read from the mode bits
/// that apply to the current user (owner, group or other), so the result
/// is the same for root. permission_checks = false drops permission issues
/// but keeps existence and type issues.
std::vector<ConfigIssue> validate_config(const WorkbenchConfig& cfg);

/// Download and documentation links shown next to the configuration.
struct HelpLink {
  std::string label;
  std::string url;
};
const std::vector<HelpLink>& help_links();

/// Latest released version of a tool. The offline implementation answers
/// "unknown" for every tool.
class UpdateChecker {
 public:
  virtual ~UpdateChecker() = default;
  virtual std::string latest_version(const std::string& tool) = 0;
};

class OfflineUpdateChecker final : public UpdateChecker {
 public:
  std::string latest_version(const std::string&) override { return "unknown"; }
};

/// First non-empty output line of `<exe> <flag>`, or "unknown" if the
/// program fails or prints nothing within the time limit.
std::string probe_version(const std::filesystem::path& exe, const std::string& flag = "--version",
                          std::chrono::milliseconds limit = std::chrono::seconds(5));

}  // namespace anbx::service
