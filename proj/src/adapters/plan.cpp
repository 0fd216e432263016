#include "anbx/adapters/plan.hpp"

#include <sstream>

#include "anbx/error.hpp"
#include "json.hpp"

namespace anbx::adapters {

using nlohmann::ordered_json;

std::string CommandPlan::command_line() const {
  std::string out = executable.string();
  for (const auto& a : args) out += " " + a;
  return out;
}

namespace {

ordered_json to_json(const CommandPlan& p) {
  ordered_json j;
  j["executable"] = p.executable.string();
  j["args"] = p.args;
  j["workingDir"] = p.working_dir.string();
  j["env"] = ordered_json::object();
  for (const auto& [k, v] : p.env) j["env"][k] = v;
  j["stdinData"] = p.stdin_data ? ordered_json(*p.stdin_data) : ordered_json(nullptr);
  if (p.stdout_path) j["stdoutPath"] = p.stdout_path->string();
  return j;
}

}  // namespace

std::string encode_plan(const CommandPlan& plan) { return to_json(plan).dump(); }

CommandPlan decode_plan(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
    CommandPlan p;
    p.executable = j.at("executable").get<std::string>();
    p.args = j.at("args").get<std::vector<std::string>>();
    p.working_dir = j.value("workingDir", std::string());
    if (j.contains("env"))
      for (const auto& [k, v] : j.at("env").items()) p.env[k] = v.get<std::string>();
    if (j.contains("stdinData") && !j.at("stdinData").is_null()) p.stdin_data = j.at("stdinData").get<std::string>();
    if (j.contains("stdoutPath")) p.stdout_path = j.at("stdoutPath").get<std::string>();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error("E-PLAN", std::string("malformed command plan: ") + e.what());
  }
}

std::string encode_plans(const std::vector<CommandPlan>& plans) {
  std::string out;
  for (const auto& p : plans) out += encode_plan(p) + "\n";
  return out;
}

std::vector<CommandPlan> decode_plans(std::string_view text) {
  std::vector<CommandPlan> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(decode_plan(line));
  return out;
}

}  // namespace anbx::adapters
