#include "anbx/semantics/symbols.hpp"

#include <algorithm>
#include <limits>

namespace anbx::semantics {

using syntax::Diagnostic;
using syntax::Severity;
using syntax::SourceRange;
using syntax::Term;

bool SymbolTable::declare(SymbolInfo info) {
  if (scopes_.empty()) push_scope();
  if (lookup_local(info.name)) return false;
  scopes_.back().push_back(std::move(info));
  return true;
}

const SymbolInfo* SymbolTable::lookup_local(std::string_view name) const {
  if (scopes_.empty()) return nullptr;
  for (const auto& s : scopes_.back())
    if (s.name == name) return &s;
  return nullptr;
}

const SymbolInfo* SymbolTable::lookup(std::string_view name) const {
  for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
    for (const auto& s : *it)
      if (s.name == name) return &s;
  return nullptr;
}

std::vector<const SymbolInfo*> SymbolTable::visible() const {
  std::vector<const SymbolInfo*> out;
  std::vector<std::string_view> seen;
  for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
    for (const auto& s : *it) {
      if (std::find(seen.begin(), seen.end(), s.name) != seen.end()) continue;
      seen.push_back(s.name);
      out.push_back(&s);
    }
  }
  return out;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

namespace {

SourceRange name_range(const Term& t) {
  SourceRange r = t.range();
  if (r.end - r.begin >= t.name().size()) {
    r.end = r.begin + t.name().size();
    r.stop = r.start;
    r.stop.column += t.name().size();
  }
  return r;
}

class Resolver {
 public:
  explicit Resolver(const syntax::ProtocolModel& m) : model_(m) {}

  ScopeResolution run() {
    SymbolTable& table = out_.table;
    table.decls = model_.types;
    table.types_end = model_.types_end;
    table.dialect = model_.dialect;

    table.push_scope();
    for (const auto& [name, sig] : builtin_signatures())
      table.declare(SymbolInfo{name, sig, {}, SymbolKind::Builtin, -1});

    table.push_scope();
    for (const auto& decl : model_.types) {
      for (const auto& e : decl.entries) {
        SemanticType type = type_of_decl(decl.kind);
        if (decl.kind == syntax::DeclKind::Function) {
          if (e.signature) {
            std::vector<SemanticType::Kind> params;
            for (auto p : e.signature->params) params.push_back(kind_of(p));
            type = SemanticType::fn(std::move(params), kind_of(e.signature->result));
          } else if (auto it = builtin_signatures().find(e.name.name); it != builtin_signatures().end()) {
            type = it->second;
          }
        }
        declare(SymbolInfo{e.name.name, type, e.name.range, SymbolKind::Declared, -1}, e.name.range);
      }
    }
    for (const auto& c : model_.certified) use(c.name, c.range);

    for (std::size_t i = 0; i < model_.definitions.size(); ++i) {
      const auto& mac = model_.definitions[i];
      table.push_scope();
      for (const auto& p : mac.params)
        declare(SymbolInfo{p.name, SemanticType::payload(), p.range, SymbolKind::MacroParam, -1}, p.range);
      term(mac.body);
      table.pop_scope();
      table.macros().push_back(mac);
      SemanticType type = mac.params.empty()
                              ? SemanticType::payload()
                              : SemanticType::fn(std::vector<SemanticType::Kind>(mac.params.size(),
                                                                                 SemanticType::Kind::Payload),
                                                 SemanticType::Kind::Payload);
      declare(SymbolInfo{mac.name.name, type, mac.name.range, SymbolKind::Macro, static_cast<int>(i)},
              mac.name.range);
    }

    for (const auto& eq : model_.equations) {
      table.push_scope();
      equation_vars_ = true;
      term(eq.lhs);
      term(eq.rhs);
      equation_vars_ = false;
      table.pop_scope();
    }

    std::vector<std::string> owners;
    for (const auto& k : model_.knowledge) {
      use(k.agent.name, k.agent.range);
      if (std::find(owners.begin(), owners.end(), k.agent.name) != owners.end()) {
        error("E-REDECLARED", k.agent.range, "knowledge of '" + k.agent.name + "' is declared twice");
      }
      owners.push_back(k.agent.name);
      for (const auto& t : k.terms) term(t);
    }

    for (const auto& a : model_.actions) {
      use(a.sender.name, a.sender.range);
      use(a.receiver.name, a.receiver.range);
      if (a.mode.auth) use(a.mode.auth->name, a.mode.auth->range);
      for (const auto& v : a.mode.verifiers) use(v.name, v.range);
      if (a.mode.dest) use(a.mode.dest->name, a.mode.dest->range);
      term(a.payload);
    }

    for (const auto& g : model_.goals) {
      if (g.kind != syntax::Goal::Kind::Secrecy) {
        use(g.verifier.name, g.verifier.range);
        use(g.peer.name, g.peer.range);
      }
      term(g.term);
      for (const auto& p : g.parties) use(p.name, p.range);
    }
    return std::move(out_);
  }

 private:
  void error(std::string code, SourceRange r, std::string msg, std::vector<syntax::Edit> fixes = {}) {
    out_.diagnostics.push_back(Diagnostic{Severity::Error, std::move(code), r, std::move(msg), std::move(fixes)});
  }

  void declare(SymbolInfo info, SourceRange r) {
    std::string name = info.name;
    if (!out_.table.declare(std::move(info)))
      error("E-REDECLARED", r, "'" + name + "' is already declared in this scope");
  }

  void use(const std::string& name, SourceRange r) {
    if (const SymbolInfo* s = out_.table.lookup(name)) {
      out_.bindings.push_back(Binding{r, name, *s});
      return;
    }
    if (equation_vars_) {
      SymbolInfo var{name, SemanticType::payload(), r, SymbolKind::EquationVar, -1};
      out_.table.declare(var);
      out_.bindings.push_back(Binding{r, name, var});
      return;
    }
    std::vector<syntax::Edit> fixes;
    const SymbolInfo* best = nullptr;
    std::size_t best_d = std::numeric_limits<std::size_t>::max();
    for (const SymbolInfo* s : out_.table.visible()) {
      std::size_t d = edit_distance(name, s->name);
      if (d < best_d) {
        best_d = d;
        best = s;
      }
    }
    if (best) fixes.push_back(syntax::Edit{r, best->name, "Change to '" + best->name + "'"});
    error("E-UNDECLARED", r, "'" + name + "' is not declared", std::move(fixes));
  }

  void term(const Term& t) {
    if (t.is(Term::Kind::Atom)) {
      use(t.name(), t.range());
      return;
    }
    if (t.is(Term::Kind::Apply)) {
      // Equation variables never stand in function position.
      bool saved = equation_vars_;
      equation_vars_ = false;
      use(t.name(), name_range(t));
      equation_vars_ = saved;
    }
    for (const auto& c : t.children()) term(c);
  }

  const syntax::ProtocolModel& model_;
  ScopeResolution out_;
  bool equation_vars_ = false;
};

}  // namespace

ScopeResolution resolve_scopes(const syntax::ProtocolModel& model) { return Resolver(model).run(); }

}  // namespace anbx::semantics
