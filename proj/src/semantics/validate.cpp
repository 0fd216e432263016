#include "anbx/semantics/validate.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "anbx/semantics/deduction.hpp"
#include "anbx/semantics/fixes.hpp"
#include "anbx/semantics/symbols.hpp"
#include "anbx/semantics/typecheck.hpp"
#include "anbx/syntax/parser.hpp"
#include "anbx/syntax/printer.hpp"

namespace anbx::semantics {

using syntax::Action;
using syntax::ChannelMode;
using syntax::Diagnostic;
using syntax::Edit;
using syntax::Ident;
using syntax::Severity;
using syntax::SourceRange;
using syntax::Term;

namespace {

constexpr int kMaxExpansionDepth = 64;

const syntax::Macro* find_macro(const std::vector<syntax::Macro>& macros, const std::string& name) {
  for (const auto& m : macros)
    if (m.name.name == name) return &m;
  return nullptr;
}

Term substitute(const Term& body, const std::map<std::string, Term>& args) {
  if (body.is(Term::Kind::Atom)) {
    auto it = args.find(body.name());
    return it == args.end() ? body : it->second;
  }
  Term out = body;
  for (auto& c : out.children()) c = substitute(c, args);
  return out;
}

Term expand(const std::vector<syntax::Macro>& macros, const Term& t, int depth) {
  if (depth > kMaxExpansionDepth) return t;
  const syntax::Macro* mac = nullptr;
  if (t.is(Term::Kind::Atom) || t.is(Term::Kind::Apply)) mac = find_macro(macros, t.name());
  if (mac && t.is(Term::Kind::Atom) && mac->params.empty()) {
    Term out = expand(macros, mac->body, depth + 1);
    out.set_range(t.range());
    return out;
  }
  if (mac && t.is(Term::Kind::Apply) && mac->params.size() == t.children().size()) {
    std::map<std::string, Term> args;
    for (std::size_t i = 0; i < mac->params.size(); ++i)
      args.emplace(mac->params[i].name, expand(macros, t.children()[i], depth));
    Term out = expand(macros, substitute(mac->body, args), depth + 1);
    out.set_range(t.range());
    return out;
  }
  Term out = t;
  for (auto& c : out.children()) c = expand(macros, c, depth);
  return out;
}

bool contains_subterm(const Term& haystack, const Term& needle) {
  bool found = false;
  syntax::for_each_subterm(haystack, [&](const Term& s) { found = found || s == needle; });
  return found;
}

class Validator {
 public:
  explicit Validator(const syntax::ProtocolModel& m) : model_(m), scopes_(resolve_scopes(m)) {}

  std::vector<Diagnostic> run() {
    out_ = scopes_.diagnostics;
    const SymbolTable& table = scopes_.table;

    check_dialect();

    for (const auto& c : model_.certified) require_agent(c, "certified entry");
    for (const auto& k : model_.knowledge) {
      require_agent(k.agent, "knowledge owner");
      for (const auto& t : k.terms) check_term(table, t, out_);
    }
    for (const auto& eq : model_.equations) check_equation(eq);
    for (const auto& a : model_.actions) check_action(a);
    for (const auto& g : model_.goals) check_goal(g);

    if (scopes_.ok()) check_knowledge();
    return finish();
  }

 private:
  void emit(Severity sev, std::string code, SourceRange r, std::string msg, std::vector<Edit> fixes = {}) {
    out_.push_back(Diagnostic{sev, std::move(code), r, std::move(msg), std::move(fixes)});
  }

  const SymbolInfo* lookup(const std::string& name) const { return scopes_.table.lookup(name); }

  bool is_agent(const std::string& name) const {
    const SymbolInfo* s = lookup(name);
    return s && s->type.is(SemanticType::Kind::Agent);
  }

  void check_dialect() {
    if (model_.dialect != syntax::Dialect::AnB) return;
    if (!model_.certified.empty())
      emit(Severity::Error, "E-DIALECT", model_.certified_range, "'Certified' is only available in AnBx");
    for (const auto& a : model_.actions)
      if (a.mode.triple)
        emit(Severity::Error, "E-DIALECT", a.mode.range, "channel modes are only available in AnBx");
  }

  void require_agent(const Ident& id, const std::string& role) {
    const SymbolInfo* s = lookup(id.name);
    if (!s || s->type.is(SemanticType::Kind::Agent)) return;
    std::vector<Edit> fixes;
    if (auto e = retype_edit(scopes_.table, id.name, syntax::DeclKind::Agent)) fixes.push_back(*e);
    emit(Severity::Error, "E-AGENT-EXPECTED", id.range,
         role + " '" + id.name + "' must be an Agent, found " + to_string(s->type), std::move(fixes));
  }

  void check_equation(const syntax::Equation& eq) {
    SymbolTable table = scopes_.table;
    table.push_scope();
    auto bind_vars = [&](const Term& t) {
      syntax::for_each_subterm(t, [&](const Term& s) {
        if (s.is(Term::Kind::Atom) && !table.lookup(s.name()))
          table.declare(SymbolInfo{s.name(), SemanticType::payload(), s.range(), SymbolKind::EquationVar, -1});
      });
    };
    bind_vars(eq.lhs);
    bind_vars(eq.rhs);
    check_term(table, eq.lhs, out_);
    check_term(table, eq.rhs, out_);
  }

  Edit mode_edit(const Action& a, ChannelMode mode, std::string label) {
    if (!mode.auth) mode.fresh = false;
    return Edit{a.mode.range, syntax::print_mode(mode), std::move(label)};
  }

  void check_action(const Action& a) {
    require_agent(a.sender, "sender");
    require_agent(a.receiver, "receiver");
    check_term(scopes_.table, a.payload, out_);
    if (a.sender.name == a.receiver.name)
      emit(Severity::Warning, "W-SELF-SEND", SourceRange{a.sender.range.begin, a.receiver.range.end,
                                                          a.sender.range.start, a.receiver.range.stop},
           "'" + a.sender.name + "' sends a message to itself");
    if (!a.mode.triple) return;
    const ChannelMode& m = a.mode;

    auto slot_agent = [&](const Ident& id, ChannelMode without) {
      const SymbolInfo* s = lookup(id.name);
      if (!s || s->type.is(SemanticType::Kind::Agent)) return;
      std::vector<Edit> fixes;
      fixes.push_back(mode_edit(a, std::move(without), "Remove '" + id.name + "' from the channel mode"));
      if (auto e = retype_edit(scopes_.table, id.name, syntax::DeclKind::Agent)) fixes.push_back(*e);
      emit(Severity::Error, "E-MODE-AGENT", id.range,
           "channel modes only accept Agent identifiers; '" + id.name + "' is " + to_string(s->type),
           std::move(fixes));
    };
    if (m.auth) {
      ChannelMode w = m;
      w.auth.reset();
      slot_agent(*m.auth, w);
    }
    for (std::size_t i = 0; i < m.verifiers.size(); ++i) {
      ChannelMode w = m;
      w.verifiers.erase(w.verifiers.begin() + static_cast<std::ptrdiff_t>(i));
      slot_agent(m.verifiers[i], w);
    }
    if (m.dest) {
      ChannelMode w = m;
      w.dest.reset();
      slot_agent(*m.dest, w);
    }

    if (m.auth && m.verifiers.empty()) {
      ChannelMode add = m, drop = m;
      add.verifiers.push_back(a.receiver);
      drop.auth.reset();
      emit(Severity::Error, "E-MODE-AUTHVERS", m.range,
           "authenticating agent '" + m.auth->name + "' has no verifier",
           {mode_edit(a, add, "Add '" + a.receiver.name + "' as verifier"),
            mode_edit(a, drop, "Remove the authenticating agent")});
    } else if (!m.auth && !m.verifiers.empty()) {
      ChannelMode add = m, drop = m;
      add.auth = a.sender;
      drop.verifiers.clear();
      emit(Severity::Error, "E-MODE-AUTHVERS", m.range, "verifiers are given without an authenticating agent",
           {mode_edit(a, add, "Set '" + a.sender.name + "' as authenticating agent"),
            mode_edit(a, drop, "Remove the verifiers")});
    }

    if (model_.dialect == syntax::Dialect::AnBx) {
      std::vector<const Ident*> keyed;
      if (m.auth) keyed.push_back(&*m.auth);
      if (m.dest) keyed.push_back(&*m.dest);
      for (const Ident* id : keyed) {
        if (!is_agent(id->name) || model_.is_certified(id->name) || warned_uncertified_.count(id->name)) continue;
        warned_uncertified_.insert(id->name);
        emit(Severity::Warning, "W-UNCERTIFIED", id->range,
             "'" + id->name + "' needs certified keys for this channel mode", {certify_edit(id->name)});
      }
    }
  }

  Edit certify_edit(const std::string& agent) const {
    std::string label = "Declare '" + agent + "' as Certified";
    if (!model_.certified.empty()) {
      SourceRange at = model_.certified_range;
      at.begin = at.end;
      at.start = at.stop;
      return Edit{at, "," + agent, label};
    }
    SourceRange at = model_.types_end;
    at.begin = at.end;
    at.start = at.stop;
    return Edit{at, ";\n  Certified " + agent, label};
  }

  void check_goal(const syntax::Goal& g) {
    check_term(scopes_.table, g.term, out_);
    auto party = [&](const Ident& id) {
      const SymbolInfo* s = lookup(id.name);
      if (s && !s->type.is(SemanticType::Kind::Agent))
        emit(Severity::Error, "E-GOAL-REF", id.range, "goal party '" + id.name + "' is not an Agent");
    };
    if (g.kind == syntax::Goal::Kind::Secrecy) {
      for (const auto& p : g.parties) party(p);
    } else {
      party(g.verifier);
      party(g.peer);
    }
    Term target = expand_term(model_.definitions, g.term);
    bool present = false;
    for (const auto& a : model_.actions)
      present = present || contains_subterm(expand_term(model_.definitions, a.payload), target);
    for (const auto& k : model_.knowledge)
      for (const auto& t : k.terms) present = present || contains_subterm(expand_term(model_.definitions, t), target);
    if (!present)
      emit(Severity::Error, "E-GOAL-REF", g.term.range(),
           "goal term '" + syntax::print_term(g.term) + "' does not occur in any message or knowledge");
  }

  void check_knowledge() {
    std::set<std::string> public_fns;
    for (const auto& [name, sig] : builtin_signatures())
      if (is_public_builtin(name)) public_fns.insert(name);
    for (const auto& d : model_.types)
      if (d.kind == syntax::DeclKind::Function)
        for (const auto& e : d.entries) public_fns.insert(e.name.name);

    std::set<std::string> seen_atoms;
    auto note_atoms = [&](const Term& t) {
      syntax::for_each_subterm(t, [&](const Term& s) {
        if (s.is(Term::Kind::Atom)) seen_atoms.insert(s.name());
      });
    };

    std::map<std::string, KnowledgeSet> know;
    auto agent_set = [&](const std::string& name) -> KnowledgeSet& {
      auto it = know.find(name);
      if (it == know.end()) it = know.emplace(name, KnowledgeSet(public_fns)).first;
      return it->second;
    };
    for (const auto& k : model_.knowledge) {
      KnowledgeSet& ks = agent_set(k.agent.name);
      for (const auto& t : k.terms) {
        Term e = expand_term(model_.definitions, t);
        note_atoms(e);
        ks.add(e);
      }
    }
    for (const auto& c : model_.certified) {
      KnowledgeSet& ks = agent_set(c.name);
      ks.add(Term::apply("inv", {Term::apply("pk", {Term::atom(c.name)})}));
      ks.add(Term::apply("inv", {Term::apply("sk", {Term::atom(c.name)})}));
    }

    std::set<std::string> has_sent;
    for (const auto& a : model_.actions) {
      Term payload = expand_term(model_.definitions, a.payload);
      KnowledgeSet& sender = agent_set(a.sender.name);
      syntax::for_each_subterm(payload, [&](const Term& s) {
        if (!s.is(Term::Kind::Atom) || seen_atoms.count(s.name())) return;
        const SymbolInfo* info = lookup(s.name());
        if (info && info->kind == SymbolKind::Declared && !info->type.is(SemanticType::Kind::Agent) &&
            !info->type.is(SemanticType::Kind::Fn))
          sender.add(Term::atom(s.name()));
      });
      note_atoms(payload);
      if (has_sent.insert(a.sender.name).second && !sender.can_derive(payload)) {
        emit(Severity::Error, "E-KNOWLEDGE", a.payload.range(),
             "'" + a.sender.name + "' cannot construct '" + syntax::print_term(a.payload) +
                 "' from its knowledge and the messages it has received");
      }
      agent_set(a.receiver.name).add(payload);
    }
  }

  std::vector<Diagnostic> finish() {
    syntax::sort_by_range(out_);
    std::vector<Diagnostic> unique;
    for (auto& d : out_) {
      bool dup = std::any_of(unique.begin(), unique.end(), [&](const Diagnostic& u) {
        return u.code == d.code && u.range.begin == d.range.begin && u.range.end == d.range.end;
      });
      if (!dup) unique.push_back(std::move(d));
    }
    return unique;
  }

  const syntax::ProtocolModel& model_;
  ScopeResolution scopes_;
  std::vector<Diagnostic> out_;
  std::set<std::string> warned_uncertified_;
};

}  // namespace

Term expand_term(const std::vector<syntax::Macro>& macros, const Term& t) {
  if (macros.empty()) return t;
  return expand(macros, t, 0);
}

syntax::ProtocolModel expand_macros(const syntax::ProtocolModel& model) {
  syntax::ProtocolModel out = model;
  const auto& macros = model.definitions;
  for (auto& k : out.knowledge)
    for (auto& t : k.terms) t = expand_term(macros, t);
  for (auto& eq : out.equations) {
    eq.lhs = expand_term(macros, eq.lhs);
    eq.rhs = expand_term(macros, eq.rhs);
  }
  for (auto& a : out.actions) a.payload = expand_term(macros, a.payload);
  for (auto& g : out.goals) g.term = expand_term(macros, g.term);
  out.definitions.clear();
  out.section_ranges.erase(std::remove_if(out.section_ranges.begin(), out.section_ranges.end(),
                                          [](const auto& p) { return p.first == syntax::Section::Definitions; }),
                           out.section_ranges.end());
  return out;
}

std::vector<Diagnostic> validate(const syntax::ProtocolModel& model) { return Validator(model).run(); }

std::vector<Diagnostic> check_source(const syntax::SourceFile& source) {
  syntax::ParseResult parsed = syntax::parse(source);
  std::vector<Diagnostic> out = parsed.diagnostics;
  if (parsed.model) {
    auto more = validate(*parsed.model);
    out.insert(out.end(), more.begin(), more.end());
    syntax::sort_by_range(out);
  }
  return out;
}

}  // namespace anbx::semantics
