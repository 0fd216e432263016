#include "anbx/adapters/tools.hpp"

#include <unistd.h>

#include <cstdlib>
#include <sstream>

#include "anbx/error.hpp"

namespace anbx::adapters {

namespace fs = std::filesystem;

std::string to_string(Tool t) {
  switch (t) {
    case Tool::Anbxc: return "anbxc";
    case Tool::Ofmc: return "ofmc";
    case Tool::ProVerif: return "proverif";
    case Tool::Docker: return "docker";
    case Tool::Generic: return "generic";
  }
  return "generic";
}

Tool tool_from_string(const std::string& name) {
  for (Tool t : {Tool::Anbxc, Tool::Ofmc, Tool::ProVerif, Tool::Docker, Tool::Generic})
    if (to_string(t) == name) return t;
  throw Error("E-CONFIG", "unknown tool '" + name + "'");
}

namespace {

bool is_executable_file(const fs::path& p) {
  std::error_code ec;
  return fs::is_regular_file(p, ec) && ::access(p.c_str(), X_OK) == 0;
}

}  // namespace

fs::path resolve_executable(const fs::path& exe) {
  if (exe.empty()) throw Error("E-CONFIG", "no executable configured");
  std::string s = exe.string();
  if (s.find('/') != std::string::npos) {
    if (!is_executable_file(exe)) throw Error("E-CONFIG", "'" + s + "' is not an executable file");
    return fs::absolute(exe);
  }
  const char* path = std::getenv("PATH");
  std::istringstream dirs(path ? path : "");
  std::string dir;
  while (std::getline(dirs, dir, ':')) {
    if (dir.empty()) continue;
    fs::path candidate = fs::path(dir) / exe;
    if (is_executable_file(candidate)) return candidate;
  }
  throw Error("E-CONFIG", "'" + s + "' was not found on PATH");
}

std::vector<CommandPlan> build_ofmc_invocation(const fs::path& ofmc, const fs::path& protocol,
                                               const OfmcOptions& options, const ToolFlags& flags) {
  fs::path exe = resolve_executable(ofmc);
  if (options.sessions < 1) throw Error("E-BADN", "session count must be at least 1");
  auto verify_args = [&](const fs::path& input) {
    std::vector<std::string> args{input.string(), flags.ofmc_sessions, std::to_string(options.sessions)};
    if (options.theory) {
      args.push_back(flags.ofmc_theory);
      args.push_back(options.theory->string());
    }
    return args;
  };
  fs::path dir = protocol.parent_path();
  if (!options.via_if) return {CommandPlan{exe, verify_args(protocol), dir, {}, {}, {}}};

  fs::path if_file = protocol;
  if_file.replace_extension(".if");
  CommandPlan emit{exe, {protocol.string(), flags.ofmc_output_format, flags.ofmc_if_format}, dir, {}, {}, if_file};
  return {emit, CommandPlan{exe, verify_args(if_file), dir, {}, {}, {}}};
}

CommandPlan build_proverif_invocation(const fs::path& proverif, const fs::path& pv, ProVerifMode mode,
                                      const ToolFlags& flags) {
  fs::path exe = resolve_executable(proverif);
  std::vector<std::string> args;
  if (mode == ProVerifMode::Pitype) args = {flags.proverif_input, "pitype", pv.string()};
  else args = {pv.string()};
  return CommandPlan{exe, args, pv.parent_path(), {}, {}, {}};
}

CommandPlan build_anbxc_invocation(const fs::path& anbxc, const fs::path& protocol, ExportTarget target,
                                   const ToolFlags& flags) {
  fs::path exe = resolve_executable(anbxc);
  const std::string& flag = target == ExportTarget::AnB ? flags.anbxc_export_anb : flags.anbxc_export_pv;
  return CommandPlan{exe, {protocol.string(), flag}, protocol.parent_path(), {}, {}, {}};
}

std::vector<CommandPlan> docker_run_plan(const fs::path& last_build_file, const fs::path& current_build_file,
                                         const fs::path& docker, const ToolFlags& flags) {
  return {
      CommandPlan{docker, {flags.docker_compose, "-f", last_build_file.string(), "down"}, {}, {}, {}, {}},
      CommandPlan{docker, {"container", "prune", "--force"}, {}, {}, {}, {}},
      CommandPlan{docker, {"network", "prune", "--force"}, {}, {}, {}, {}},
      CommandPlan{docker, {flags.docker_compose, "-f", current_build_file.string(), "up"}, {}, {}, {}, {}},
  };
}

}  // namespace anbx::adapters
