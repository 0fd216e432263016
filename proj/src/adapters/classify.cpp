#include "anbx/adapters/classify.hpp"

#include <set>
#include <sstream>

#include "anbx/error.hpp"

namespace anbx::adapters {

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Safe: return "Safe";
    case Outcome::Attack: return "Attack";
    case Outcome::Inconclusive: return "Inconclusive";
    case Outcome::Timeout: return "Timeout";
    case Outcome::ToolError: return "ToolError";
  }
  return "ToolError";
}

Outcome outcome_from_string(const std::string& name) {
  for (Outcome o : {Outcome::Safe, Outcome::Attack, Outcome::Inconclusive, Outcome::Timeout, Outcome::ToolError})
    if (to_string(o) == name) return o;
  throw Error("E-CONFIG", "unknown outcome class '" + name + "'");
}

ClassifierRule::ClassifierRule(std::string p, Outcome o) : pattern(std::move(p)), outcome(o) {
  try {
    re = std::regex(pattern, std::regex::ECMAScript);
  } catch (const std::regex_error& e) {
    throw Error("E-CONFIG", "bad classifier pattern '" + pattern + "': " + e.what());
  }
}

const RuleBook& default_rules() {
  static const RuleBook book = [] {
    RuleBook b;
    b[Tool::Ofmc].rules = {
        {R"(\bNO_ATTACK_FOUND\b)", Outcome::Safe},
        {R"(\bATTACK_FOUND\b)", Outcome::Attack},
        {R"(\bINCONCLUSIVE\b)", Outcome::Inconclusive},
        {R"(^\s*(ERROR|Error|error)\b|\bParse error\b)", Outcome::ToolError},
    };
    b[Tool::ProVerif].rules = {
        {R"(RESULT .* is false\.)", Outcome::Attack},
        {R"(cannot be proved)", Outcome::Inconclusive},
        {R"(RESULT .* is true\.)", Outcome::Safe},
        {R"(^\s*Error\b|^File ".*", line \d+)", Outcome::ToolError},
    };
    b[Tool::Anbxc].rules = {{R"(\b(ERROR|Error|Exception)\b)", Outcome::ToolError}};
    b[Tool::Anbxc].zero_exit = Outcome::Safe;
    b[Tool::Docker].rules = {{R"(^\s*(Error|error)\b)", Outcome::ToolError}};
    b[Tool::Docker].zero_exit = Outcome::Safe;
    b[Tool::Generic].zero_exit = Outcome::Safe;
    return b;
  }();
  return book;
}

RuleBook load_rules(const std::string& text) {
  RuleBook book = default_rules();
  std::set<Tool> replaced;
  std::optional<Tool> current;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[' && t.back() == ']') {
      current = tool_from_string(trim(t.substr(1, t.size() - 2)));
      if (replaced.insert(*current).second) book[*current] = ClassifierRuleSet{};
      continue;
    }
    auto eq = t.find('=');
    if (!current || eq == std::string::npos)
      throw Error("E-CONFIG", "rule file line " + std::to_string(lineno) + ": expected '[tool]' or 'Class = regex'");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key == "zero-exit") book[*current].zero_exit = outcome_from_string(value);
    else book[*current].rules.emplace_back(value, outcome_from_string(key));
  }
  return book;
}

std::optional<std::string> goal_label_from_name(const std::string& name) {
  static const std::regex re(R"(_goal(\d+)(\.[A-Za-z]+)?$)");
  std::smatch m;
  if (std::regex_search(name, m, re)) return "g" + m[1].str();
  return std::nullopt;
}

namespace {

std::optional<std::string> goal_in_text(const std::string& text) {
  static const std::regex re(R"(_goal(\d+)\b)");
  std::smatch m;
  if (std::regex_search(text, m, re)) return "g" + m[1].str();
  return std::nullopt;
}

}  // namespace

std::optional<Outcome> classify_line(Tool tool, const std::string& line, const RuleBook& rules) {
  auto it = rules.find(tool);
  if (it == rules.end()) return std::nullopt;
  for (const auto& r : it->second.rules)
    if (std::regex_search(line, r.re)) return r.outcome;
  return std::nullopt;
}

OutcomeClass classify_output(Tool tool, const std::string& text, int exit_code, const RuleBook& rules,
                             const std::string& protocol_hint) {
  OutcomeClass out;
  out.goal_name = goal_in_text(text);
  if (!out.goal_name && !protocol_hint.empty()) out.goal_name = goal_label_from_name(protocol_hint);

  auto it = rules.find(tool);
  const ClassifierRuleSet empty;
  const ClassifierRuleSet& set = it == rules.end() ? empty : it->second;

  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
  }
  for (const auto& rule : set.rules) {
    for (const auto& line : lines) {
      if (std::regex_search(line, rule.re)) {
        out.outcome = rule.outcome;
        out.excerpt = line;
        return out;
      }
    }
  }
  out.outcome = exit_code == 0 ? set.zero_exit : Outcome::ToolError;
  return out;
}

}  // namespace anbx::adapters
