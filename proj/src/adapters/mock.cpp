#include "anbx/adapters/mock.hpp"

#include <fstream>
#include <sstream>
#include <thread>

#include "anbx/error.hpp"

namespace anbx::adapters {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

int to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    int n = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    throw Error("E-CONFIG", "mock script: '" + key + "' needs an integer, got '" + v + "'");
  }
}

Outcome scripted_outcome(const std::string& v) {
  Outcome o = outcome_from_string(v);
  if (o == Outcome::Timeout) throw Error("E-CONFIG", "mock script: Timeout is assigned by the scheduler, use a long delay");
  return o;
}

int severity(Outcome o) {
  switch (o) {
    case Outcome::Attack: return 4;
    case Outcome::ToolError: return 3;
    case Outcome::Inconclusive: return 2;
    case Outcome::Timeout: return 2;
    case Outcome::Safe: return 1;
  }
  return 0;
}

std::string goal_number(const std::string& label) { return label.size() > 1 ? label.substr(1) : label; }

std::string ofmc_text(const std::string& input, Outcome o) {
  std::string summary = o == Outcome::Attack ? "ATTACK_FOUND" : o == Outcome::Safe ? "NO_ATTACK_FOUND" : "INCONCLUSIVE";
  return "Open-Source Fixedpoint Model-Checker version mock\nINPUT:\n   " + input + "\nSUMMARY:\n  " + summary +
         "\nGOAL:\n  as specified\nSTATISTICS:\n  mock\n";
}

std::string proverif_text(const std::string& input, Outcome o) {
  std::string verdict = o == Outcome::Attack ? "is false." : o == Outcome::Safe ? "is true." : "cannot be proved.";
  return "Process 0 (that is, the initial process):\n-- Query not attacker(secret[]) in " + input +
         "\n--------------------------------------------------------------\nVerification summary:\n\n"
         "RESULT not attacker(secret[]) " + verdict + "\n\n"
         "--------------------------------------------------------------\n";
}

}  // namespace

MockScript MockScript::parse(const std::string& text) {
  MockScript s;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw Error("E-CONFIG", "mock script: expected key = value, got '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key == "tool") {
      s.tool = tool_from_string(value);
      if (s.tool != Tool::Ofmc && s.tool != Tool::ProVerif)
        throw Error("E-CONFIG", "mock script: tool must be ofmc or proverif");
    } else if (key == "class") {
      s.outcome = scripted_outcome(value);
    } else if (key == "delay_ms") {
      s.delay_ms = to_int(key, value);
    } else if (key == "all_delay_ms") {
      s.all_delay_ms = to_int(key, value);
    } else if (key == "goal") {
      s.goal = value;
    } else if (key.rfind("goal.", 0) == 0) {
      s.per_goal[key.substr(5)] = scripted_outcome(value);
    } else if (key == "exit_code") {
      s.exit_code = to_int(key, value);
    } else if (key == "ignore_term") {
      s.ignore_term = value == "1" || value == "true";
    } else {
      throw Error("E-CONFIG", "mock script: unknown key '" + key + "'");
    }
  }
  return s;
}

MockScript MockScript::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("E-IO", "cannot read mock script " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string MockScript::serialize() const {
  std::ostringstream out;
  out << "tool = " << to_string(tool) << "\n";
  out << "class = " << to_string(outcome) << "\n";
  out << "delay_ms = " << delay_ms << "\n";
  if (all_delay_ms) out << "all_delay_ms = " << *all_delay_ms << "\n";
  if (goal) out << "goal = " << *goal << "\n";
  for (const auto& [g, o] : per_goal) out << "goal." << g << " = " << to_string(o) << "\n";
  if (exit_code) out << "exit_code = " << *exit_code << "\n";
  if (ignore_term) out << "ignore_term = 1\n";
  return out.str();
}

MockRun plan_mock_run(const MockScript& script, const std::string& input,
                      const std::optional<std::string>& goal_override) {
  MockRun run;
  std::string name = std::filesystem::path(input).filename().string();
  if (name.empty()) name = "mock";
  run.goal = goal_override;
  if (!run.goal) run.goal = goal_label_from_name(name);
  if (!run.goal) run.goal = script.goal;

  if (run.goal) {
    auto it = script.per_goal.find(*run.goal);
    run.outcome = it == script.per_goal.end() ? script.outcome : it->second;
    run.delay_ms = script.delay_ms;
    if (!goal_label_from_name(name)) {
      auto stem = std::filesystem::path(name).stem().string();
      auto ext = std::filesystem::path(name).extension().string();
      name = stem + "_goal" + goal_number(*run.goal) + (ext.empty() ? ".AnB" : ext);
    }
  } else {
    run.outcome = script.outcome;
    for (const auto& [g, o] : script.per_goal)
      if (severity(o) > severity(run.outcome)) run.outcome = o;
    run.delay_ms = script.all_delay_ms.value_or(script.delay_ms);
  }

  if (run.outcome == Outcome::ToolError) {
    run.output = "mock: \x01\x02 unreadable input " + name + "\n";
    run.exit_code = 1;
  } else {
    run.output = script.tool == Tool::ProVerif ? proverif_text(name, run.outcome) : ofmc_text(name, run.outcome);
    run.exit_code = 0;
  }
  if (script.exit_code) run.exit_code = *script.exit_code;
  return run;
}

MockRun run_mock_verifier(const MockScript& script, const std::string& input,
                          const std::optional<std::string>& goal_override, bool sleep) {
  MockRun run = plan_mock_run(script, input, goal_override);
  if (sleep && run.delay_ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(run.delay_ms));
  return run;
}

MockArgs parse_mock_args(const std::vector<std::string>& args) {
  MockArgs out;
  bool have_input = false;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.empty() || a[0] != '-') {
      if (!have_input) out.input = a;
      have_input = true;
      continue;
    }
    std::optional<std::string> value;
    if (i + 1 < args.size() && (args[i + 1].empty() || args[i + 1][0] != '-')) value = args[++i];
    if (a == "--script" && value) {
      out.script = *value;
    } else if (a == "--goal" && value) {
      out.goal = *value;
    } else if (a == "--class" && value) {
      out.outcome = scripted_outcome(*value);
    } else if (a == "--delay-ms" && value) {
      out.delay_ms = to_int("--delay-ms", *value);
    } else if (a == "--script" || a == "--goal" || a == "--class" || a == "--delay-ms") {
      throw Error("E-CONFIG", "mock: " + a + " needs a value");
    }
  }
  return out;
}

MockScript apply_mock_args(MockScript script, const MockArgs& args) {
  if (args.outcome) {
    script.outcome = *args.outcome;
    script.per_goal.clear();
  }
  if (args.delay_ms) {
    script.delay_ms = *args.delay_ms;
    script.all_delay_ms = *args.delay_ms;
  }
  return script;
}

}  // namespace anbx::adapters
