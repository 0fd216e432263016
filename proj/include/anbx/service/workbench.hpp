#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "anbx/results/bench.hpp"
#include "anbx/results/tree.hpp"
#include "anbx/scheduler/scheduler.hpp"
#include "anbx/service/config.hpp"
#include "anbx/syntax/source.hpp"

namespace anbx::service {

/// Verifier choice. Mock runs the mock verifier binary with OFMC command
/// lines and OFMC output.
enum class VerifyTool { Ofmc, ProVerif, Mock };

std::string to_string(VerifyTool t);
/// "ofmc", "proverif" or "mock"; E-CONFIG otherwise.
VerifyTool verify_tool_from_string(const std::string& name);

struct VerifyRequest {
  std::filesystem::path path;
  VerifyTool tool = VerifyTool::Ofmc;
  int sessions = 1;
  bool one_session_first = false;
  bool single_goals = false;
  bool via_if = false;
  bool new_console = false;
  std::optional<std::filesystem::path> theory;
  /// Where generated files go; default "<source dir>/anbx-out".
  std::optional<std::filesystem::path> out_dir;
};

enum class CompileTarget { AnB, ProVerif };

struct CompileRequest {
  std::filesystem::path path;
  CompileTarget target = CompileTarget::AnB;
  bool single_goals = false;
  bool new_console = false;
  std::optional<std::filesystem::path> out_dir;
};

/// What a compile or verify request produced. With errors in
/// `diagnostics` nothing was written or submitted.
struct JobReport {
  std::vector<std::filesystem::path> files;
  std::vector<syntax::Diagnostic> diagnostics;
  /// Root tasks in submission order.
  std::vector<scheduler::TaskId> tasks;

  bool ok() const { return !syntax::has_errors(diagnostics); }
};

struct ProtocolInfo {
  std::filesystem::path path;
  std::string name;
  syntax::Dialect dialect = syntax::Dialect::AnBx;
  int goals = 0;
  int errors = 0;
  int warnings = 0;
};

/// The in-process workbench behind the CLI and the HTTP service: one
/// scheduler, one result tree, one configuration.
class Workbench {
 public:
  /// Relative request paths resolve against `workspace`. When
  /// `config_path` is set, accepted configuration changes are saved there.
  Workbench(WorkbenchConfig config, std::filesystem::path workspace,
            std::shared_ptr<scheduler::Executor> executor = nullptr,
            std::optional<std::filesystem::path> config_path = std::nullopt);
  ~Workbench();

  const std::filesystem::path& workspace() const { return workspace_; }
  std::filesystem::path resolve(const std::filesystem::path& p) const;

  /// .AnB and .AnBx files under the workspace, skipping generated output
  /// and hidden directories, sorted by path.
  std::vector<ProtocolInfo> protocols() const;

  /// Parse and semantic diagnostics. Errors: E-IO.
  std::vector<syntax::Diagnostic> check(const std::filesystem::path& path) const;

  /// AnB output is produced in process; ProVerif output is delegated to the
  /// AnBx compiler as tasks. Errors: E-IO, E-CONFIG.
  JobReport compile(const CompileRequest& request);

  /// Errors: E-IO, E-CONFIG (tool not configured), E-BADN.
  JobReport verify(const VerifyRequest& request);

  /// Export to AnB, verify with OFMC, rebuild the attack trace on Attack.
  /// Errors: E-CONFIG.
  scheduler::TaskId reconstruct(const std::filesystem::path& path, bool new_console = false);

  /// Table-1 style measurements over the corpus. OFMC and the mock verify
  /// lowered AnB; ProVerif first has the AnBx compiler export each file.
  std::vector<results::BenchRow> bench(const std::vector<std::filesystem::path>& corpus, VerifyTool tool,
                                       int repetitions, int sessions = 1, std::optional<int> max_parallel = std::nullopt,
                                       const std::optional<std::filesystem::path>& out_dir = std::nullopt);

  WorkbenchConfig config() const;
  /// Validates and, if there are no issues, applies (live limits included)
  /// and saves. Returns the issues.
  std::vector<ConfigIssue> set_config(const WorkbenchConfig& config);

  scheduler::Scheduler& scheduler() { return *scheduler_; }
  results::ResultAggregator& results() { return *results_; }

  /// The executable used for a tool. Errors: E-CONFIG.
  std::filesystem::path tool_executable(VerifyTool tool) const;

 private:
  std::filesystem::path anbxc() const;
  std::filesystem::path out_dir_for(const std::filesystem::path& source,
                                    const std::optional<std::filesystem::path>& requested) const;
  void add_tool_env(adapters::PipelineStep& step, VerifyTool tool) const;

  mutable std::mutex mu_;
  WorkbenchConfig config_;
  std::filesystem::path workspace_;
  std::shared_ptr<scheduler::Executor> executor_;
  std::optional<std::filesystem::path> config_path_;
  std::unique_ptr<scheduler::Scheduler> scheduler_;
  std::unique_ptr<results::ResultAggregator> results_;
};

/// The mock verifier next to the running program, else on PATH.
std::optional<std::filesystem::path> find_mock_binary();

}  // namespace anbx::service
