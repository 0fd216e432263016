#pragma once

#include <map>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "anbx/adapters/tools.hpp"

namespace anbx::adapters {

enum class Outcome { Safe, Attack, Inconclusive, Timeout, ToolError };

std::string to_string(Outcome o);
/// Inverse of to_string; throws anbx::Error E-CONFIG on an unknown name.
Outcome outcome_from_string(const std::string& name);

struct OutcomeClass {
  Outcome outcome = Outcome::ToolError;
  std::optional<std::string> goal_name;
  std::optional<int> sessions;
  /// The output line that decided the class; empty for exit-code fallbacks.
  std::string excerpt;
};

struct ClassifierRule {
  std::string pattern;
  Outcome outcome;
  std::regex re;

  ClassifierRule(std::string pattern, Outcome outcome);
};

/// Ordered rules for one tool. Rules are tried in order against every output
/// line and the first rule that matches anywhere wins. When nothing
/// matches, a nonzero exit is ToolError and a zero exit is `zero_exit`.
struct ClassifierRuleSet {
  std::vector<ClassifierRule> rules;
  Outcome zero_exit = Outcome::Inconclusive;
};

using RuleBook = std::map<Tool, ClassifierRuleSet>;

/// Built-in rules for OFMC, ProVerif, the AnBx compiler and docker.
const RuleBook& default_rules();

/// Parses a rule file:
///
///   [ofmc]
///   zero-exit = Inconclusive
///   Attack = \bATTACK_FOUND\b
///
/// Sections name tools; within a section, rules keep file order. '#' starts
/// a comment line. Tools not mentioned keep their default rules.
/// Throws anbx::Error E-CONFIG on malformed lines or bad regexes.
RuleBook load_rules(const std::string& text);

/// Classifies complete tool output. The goal name comes from a
/// "<protocol>_goal<i>" name in the output (or `protocol_hint`) and reads
/// "g<i>".
OutcomeClass classify_output(Tool tool, const std::string& text, int exit_code,
                             const RuleBook& rules = default_rules(), const std::string& protocol_hint = {});

/// "g<i>" for a name ending in "_goal<i>" (optionally with an extension).
std::optional<std::string> goal_label_from_name(const std::string& name);

/// Per-line colour class for console rendering: the outcome of the first
/// rule matching that line, if any.
std::optional<Outcome> classify_line(Tool tool, const std::string& line, const RuleBook& rules = default_rules());

}  // namespace anbx::adapters
