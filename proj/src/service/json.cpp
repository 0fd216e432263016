#include "anbx/service/json.hpp"

#include "anbx/error.hpp"

namespace anbx::service {

namespace fs = std::filesystem;

namespace {

Json position(const syntax::Position& p) { return Json{{"line", p.line}, {"column", p.column}}; }

Json range(const syntax::SourceRange& r) {
  return Json{{"begin", r.begin}, {"end", r.end}, {"start", position(r.start)}, {"stop", position(r.stop)}};
}

template <class T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json optional_path(const std::optional<fs::path>& p) { return p ? Json(p->string()) : Json(nullptr); }

template <class T>
T field(const Json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const std::exception&) {
    throw Error("E-CONFIG", std::string("field '") + key + "' has the wrong type");
  }
}

std::optional<fs::path> path_field(const Json& j, const char* key, const std::optional<fs::path>& fallback) {
  if (!j.contains(key)) return fallback;
  if (j.at(key).is_null()) return std::nullopt;
  auto s = field<std::string>(j, key, "");
  if (s.empty()) return std::nullopt;
  return fs::path(s);
}

}  // namespace

Json to_json(const syntax::Diagnostic& d) {
  Json fixes = Json::array();
  for (const auto& f : d.fixes) fixes.push_back(Json{{"label", f.label}, {"replacement", f.replacement}, {"range", range(f.range)}});
  return Json{{"severity", std::string(syntax::to_string(d.severity))},
              {"code", d.code},
              {"message", d.message},
              {"range", range(d.range)},
              {"fixes", fixes}};
}

Json to_json(const std::vector<syntax::Diagnostic>& ds) {
  Json out = Json::array();
  for (const auto& d : ds) out.push_back(to_json(d));
  return out;
}

Json to_json(const adapters::OutcomeClass& o) {
  return Json{{"class", adapters::to_string(o.outcome)},
              {"goal", optional_json(o.goal_name)},
              {"sessions", optional_json(o.sessions)},
              {"excerpt", o.excerpt}};
}

Json to_json(const scheduler::TaskRow& r) {
  return Json{{"id", r.id},
              {"enqueueSeq", r.enqueue_seq},
              {"consoleId", r.console},
              {"kind", adapters::to_string(r.kind)},
              {"priority", scheduler::to_string(r.priority)},
              {"state", scheduler::to_string(r.state)},
              {"waiting", r.waiting},
              {"runtimeSeconds", r.runtime_seconds},
              {"commandLine", r.command_line},
              {"protocol", r.protocol},
              {"goal", optional_json(r.goal)},
              {"sessions", optional_json(r.sessions)},
              {"outcome", r.outcome ? to_json(*r.outcome) : Json(nullptr)},
              {"exitCode", optional_json(r.exit_code)},
              {"parent", optional_json(r.parent)},
              {"logFile", optional_path(r.log_file)}};
}

Json to_json(const scheduler::Event& e) {
  Json hints = Json::array();
  for (const auto& h : e.hints)
    hints.push_back(Json{{"offset", h.offset}, {"length", h.length}, {"class", adapters::to_string(h.outcome)}});
  Json j{{"seq", e.seq},
         {"type", scheduler::to_string(e.type)},
         {"taskId", e.task},
         {"consoleId", e.console},
         {"priority", scheduler::to_string(e.priority)},
         {"kind", adapters::to_string(e.kind)},
         {"tool", adapters::to_string(e.tool)},
         {"protocol", e.protocol},
         {"goal", optional_json(e.goal)},
         {"sessions", optional_json(e.sessions)},
         {"state", scheduler::to_string(e.state)}};
  switch (e.type) {
    case scheduler::EventType::TaskEnqueued: j["commandLine"] = e.text; break;
    case scheduler::EventType::TaskStarted:
      j["commandLine"] = e.text;
      j["running"] = e.running;
      j["maxParallel"] = e.max_parallel;
      break;
    case scheduler::EventType::OutputChunk:
      j["text"] = e.text;
      j["hints"] = hints;
      break;
    case scheduler::EventType::TaskTerminal: j["outcome"] = e.outcome ? to_json(*e.outcome) : Json(nullptr); break;
  }
  return j;
}

Json to_json(const scheduler::ConsoleChunk& c) {
  Json hints = Json::array();
  for (const auto& h : c.hints)
    hints.push_back(Json{{"offset", h.offset}, {"length", h.length}, {"class", adapters::to_string(h.outcome)}});
  return Json{{"taskId", c.task}, {"text", c.text}, {"hints", hints}};
}

Json to_json(const results::GoalResult& g) {
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(g.updated_at.time_since_epoch()).count();
  return Json{{"protocol", g.protocol},
              {"goal", g.goal},
              {"status", adapters::to_string(g.status)},
              {"sessions", optional_json(g.sessions)},
              {"tool", g.tool},
              {"updatedAt", ms}};
}

Json to_json(const std::vector<results::ProtocolResults>& view) {
  Json out = Json::array();
  for (const auto& p : view) {
    Json goals = Json::array();
    for (const auto& g : p.goals) goals.push_back(to_json(g));
    out.push_back(Json{{"protocol", p.protocol}, {"goals", goals}});
  }
  return out;
}

Json to_json(const results::BenchRow& r) {
  return Json{{"protocol", r.protocol},
              {"goals", r.goals},
              {"attacks", r.attacks},
              {"allSeconds", r.all_seconds},
              {"singleSeconds", r.single_seconds},
              {"deltaPercent", optional_json(r.delta_percent)},
              {"status", r.status}};
}

Json to_json(const WorkbenchConfig& c) {
  return Json{{"anbxcPath", optional_path(c.anbxc_path)},
              {"ofmcPath", optional_path(c.ofmc_path)},
              {"proverifPath", optional_path(c.proverif_path)},
              {"anbxcConfigPath", optional_path(c.anbxc_config_path)},
              {"logRoot", optional_path(c.log_root)},
              {"mockPath", optional_path(c.mock_path)},
              {"mockScript", optional_path(c.mock_script)},
              {"permissionChecks", c.permission_checks},
              {"consoleColors", c.console_colors},
              {"maxParallel", c.max_parallel},
              {"timeoutMinutes", c.timeout_minutes}};
}

Json to_json(const ConfigIssue& i) {
  return Json{{"code", i.code},
              {"key", i.key},
              {"path", i.path.string()},
              {"requiredPermissions", i.required_permissions},
              {"message", i.message}};
}

Json to_json(const ProtocolInfo& p) {
  return Json{{"path", p.path.string()},
              {"name", p.name},
              {"dialect", std::string(syntax::to_string(p.dialect))},
              {"goals", p.goals},
              {"errors", p.errors},
              {"warnings", p.warnings}};
}

Json to_json(const JobReport& r) {
  Json files = Json::array();
  for (const auto& f : r.files) files.push_back(f.string());
  return Json{{"ok", r.ok()}, {"files", files}, {"tasks", r.tasks}, {"diagnostics", to_json(r.diagnostics)}};
}

WorkbenchConfig config_from_json(const Json& j, WorkbenchConfig c) {
  if (!j.is_object()) throw Error("E-CONFIG", "configuration must be an object");
  c.anbxc_path = path_field(j, "anbxcPath", c.anbxc_path);
  c.ofmc_path = path_field(j, "ofmcPath", c.ofmc_path);
  c.proverif_path = path_field(j, "proverifPath", c.proverif_path);
  c.anbxc_config_path = path_field(j, "anbxcConfigPath", c.anbxc_config_path);
  c.log_root = path_field(j, "logRoot", c.log_root);
  c.mock_path = path_field(j, "mockPath", c.mock_path);
  c.mock_script = path_field(j, "mockScript", c.mock_script);
  c.permission_checks = field(j, "permissionChecks", c.permission_checks);
  c.console_colors = field(j, "consoleColors", c.console_colors);
  c.max_parallel = field(j, "maxParallel", c.max_parallel);
  c.timeout_minutes = field(j, "timeoutMinutes", c.timeout_minutes);
  return c;
}

VerifyRequest verify_request_from_json(const Json& j) {
  if (!j.is_object()) throw Error("E-CONFIG", "request must be an object");
  VerifyRequest r;
  r.path = field<std::string>(j, "path", "");
  if (r.path.empty()) throw Error("E-CONFIG", "field 'path' is required");
  r.tool = verify_tool_from_string(field<std::string>(j, "tool", "ofmc"));
  r.sessions = field(j, "sessions", 1);
  r.one_session_first = field(j, "oneSessionFirst", false);
  r.single_goals = field(j, "singleGoals", false);
  r.via_if = field(j, "viaIF", false);
  r.new_console = field(j, "newConsole", false);
  r.theory = path_field(j, "theory", std::nullopt);
  return r;
}

CompileRequest compile_request_from_json(const Json& j) {
  if (!j.is_object()) throw Error("E-CONFIG", "request must be an object");
  CompileRequest r;
  r.path = field<std::string>(j, "path", "");
  if (r.path.empty()) throw Error("E-CONFIG", "field 'path' is required");
  auto target = field<std::string>(j, "target", "anb");
  if (target == "anb") {
    r.target = CompileTarget::AnB;
  } else if (target == "pv") {
    r.target = CompileTarget::ProVerif;
  } else {
    throw Error("E-CONFIG", "target must be anb or pv, got '" + target + "'");
  }
  r.single_goals = field(j, "singleGoals", false);
  r.new_console = field(j, "newConsole", false);
  return r;
}

}  // namespace anbx::service
