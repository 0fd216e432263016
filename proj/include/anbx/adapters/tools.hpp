#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "anbx/adapters/plan.hpp"

namespace anbx::adapters {

enum class Tool { Anbxc, Ofmc, ProVerif, Docker, Generic };

std::string to_string(Tool t);
/// "anbxc", "ofmc", "proverif", "docker", "generic"; throws anbx::Error E-CONFIG otherwise.
Tool tool_from_string(const std::string& name);

/// Flag spellings of the external tools. Defaults match OFMC 2022, ProVerif
/// 2.x and the AnBx compiler; override them when a tool version differs.
struct ToolFlags {
  std::string ofmc_sessions = "--numSess";
  std::string ofmc_theory = "--theory";
  std::string ofmc_output_format = "--of";
  std::string ofmc_if_format = "IF";
  std::string proverif_input = "-in";
  std::string anbxc_export_anb = "-out:AnB";
  std::string anbxc_export_pv = "-out:PV";
  std::string anbxc_attack_trace = "-attacktrace";
  std::string docker_compose = "compose";
};

/// Absolute path of an executable: a path containing '/' must name an
/// existing executable file; a bare name is looked up on PATH.
/// Throws anbx::Error E-CONFIG if neither works.
std::filesystem::path resolve_executable(const std::filesystem::path& exe);

struct OfmcOptions {
  int sessions = 1;
  bool via_if = false;
  std::optional<std::filesystem::path> theory;
};

/// One plan for a direct run; two for viaIF (emit IF into "<stem>.if"
/// next to the protocol, then verify that file).
/// Errors: E-CONFIG (executable), E-BADN (sessions < 1).
std::vector<CommandPlan> build_ofmc_invocation(const std::filesystem::path& ofmc,
                                               const std::filesystem::path& protocol,
                                               const OfmcOptions& options, const ToolFlags& flags = {});

enum class ProVerifMode { Pitype, Solve };

/// pitype: ["-in", "pitype", file]; solve: [file] (input format from the extension).
CommandPlan build_proverif_invocation(const std::filesystem::path& proverif, const std::filesystem::path& pv,
                                      ProVerifMode mode, const ToolFlags& flags = {});

enum class ExportTarget { AnB, ProVerif };

CommandPlan build_anbxc_invocation(const std::filesystem::path& anbxc, const std::filesystem::path& protocol,
                                   ExportTarget target, const ToolFlags& flags = {});

/// Compose down on the previous build, prune containers, prune networks,
/// compose up on the current build.
std::vector<CommandPlan> docker_run_plan(const std::filesystem::path& last_build_file,
                                         const std::filesystem::path& current_build_file,
                                         const std::filesystem::path& docker = "docker",
                                         const ToolFlags& flags = {});

}  // namespace anbx::adapters
