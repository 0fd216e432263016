#include "anbx/transform/lowering.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include "anbx/semantics/types.hpp"
#include "anbx/semantics/validate.hpp"
#include "anbx/syntax/printer.hpp"

namespace anbx::transform {

using syntax::Action;
using syntax::ChannelMode;
using syntax::DeclKind;
using syntax::Diagnostic;
using syntax::Ident;
using syntax::ProtocolModel;
using syntax::Severity;
using syntax::Term;

namespace {

void collect_names(const Term& t, std::set<std::string>& out) {
  syntax::for_each_subterm(t, [&](const Term& s) {
    if (!s.name().empty()) out.insert(s.name());
  });
}

std::set<std::string> source_identifiers(const ProtocolModel& m) {
  std::set<std::string> ids{m.name.name};
  for (const auto& [name, sig] : semantics::builtin_signatures()) ids.insert(name);
  for (const auto& d : m.types)
    for (const auto& e : d.entries) ids.insert(e.name.name);
  for (const auto& c : m.certified) ids.insert(c.name);
  for (const auto& mac : m.definitions) {
    ids.insert(mac.name.name);
    for (const auto& p : mac.params) ids.insert(p.name);
    collect_names(mac.body, ids);
  }
  for (const auto& eq : m.equations) {
    collect_names(eq.lhs, ids);
    collect_names(eq.rhs, ids);
  }
  for (const auto& k : m.knowledge) {
    ids.insert(k.agent.name);
    for (const auto& t : k.terms) collect_names(t, ids);
  }
  for (const auto& a : m.actions) {
    ids.insert(a.sender.name);
    ids.insert(a.receiver.name);
    collect_names(a.payload, ids);
  }
  for (const auto& g : m.goals) {
    ids.insert(g.verifier.name);
    ids.insert(g.peer.name);
    for (const auto& p : g.parties) ids.insert(p.name);
    collect_names(g.term, ids);
  }
  return ids;
}

Term atom(const Ident& id) { return Term::atom(id.name); }
Term apply1(const char* fn, Term arg) { return Term::apply(fn, {std::move(arg)}); }
Term signing_key(const Ident& a) { return apply1("inv", apply1("sk", atom(a))); }
Term public_key(const Ident& a) { return apply1("pk", atom(a)); }

Action plain(const Ident& from, const Ident& to, Term payload, syntax::SourceRange range) {
  return Action{from, to, ChannelMode::plain(), std::move(payload), range};
}

class Lowering {
 public:
  explicit Lowering(const ProtocolModel& m) : source_(m), taken_(source_identifiers(m)) {}

  LoweringResult run() {
    LoweringResult result;
    auto diags = semantics::validate(source_);
    if (syntax::has_errors(diags)) {
      for (auto& d : diags)
        if (d.severity == Severity::Error) result.diagnostics.push_back(std::move(d));
      return result;
    }
    check_modes(result.diagnostics);
    if (!result.diagnostics.empty()) return result;

    ProtocolModel out = semantics::expand_macros(source_);
    std::vector<Action> actions;
    for (const auto& a : out.actions) lower(a, actions);
    out.actions = std::move(actions);

    for (auto& d : out.types)
      for (auto& e : d.entries) e.signature.reset();
    if (!nonces_.empty()) {
      syntax::TypeDecl decl;
      decl.kind = DeclKind::Number;
      for (const auto& n : nonces_) decl.entries.push_back(syntax::DeclEntry{Ident{n, {}}, std::nullopt, {}});
      out.types.push_back(std::move(decl));
    }

    for (const auto& c : source_.certified) {
      auto it = std::find_if(out.knowledge.begin(), out.knowledge.end(),
                             [&](const syntax::KnowledgeEntry& k) { return k.agent.name == c.name; });
      if (it == out.knowledge.end()) {
        out.knowledge.push_back(syntax::KnowledgeEntry{c, {}, {}});
        it = std::prev(out.knowledge.end());
      }
      for (Term t : {Term::atom("pk"), Term::atom("sk"), apply1("inv", public_key(c)), signing_key(c)})
        if (std::find(it->terms.begin(), it->terms.end(), t) == it->terms.end()) it->terms.push_back(t);
    }
    declare_builtins(out);

    out.certified.clear();
    out.certified_range = {};
    out.dialect = syntax::Dialect::AnB;
    out.section_ranges.clear();
    result.model = std::move(out);
    result.generated_nonces = nonces_;
    return result;
  }

 private:
  void check_modes(std::vector<Diagnostic>& out) const {
    for (const auto& a : source_.actions) {
      const ChannelMode& m = a.mode;
      if (!m.triple) continue;
      std::vector<const Ident*> agents;
      if (m.auth) agents.push_back(&*m.auth);
      for (const auto& v : m.verifiers) agents.push_back(&v);
      if (m.dest) agents.push_back(&*m.dest);
      for (const Ident* id : agents) {
        if (!source_.is_certified(id->name))
          out.push_back(Diagnostic{Severity::Error, "E-LOWER-UNCERTIFIED", id->range,
                                   "'" + id->name + "' is used in a channel mode but is not Certified", {}});
      }
      if (m.verifiers.size() > 1)
        out.push_back(Diagnostic{Severity::Error, "E-LOWER-MULTIVERS", m.verifiers_range,
                                 "channel modes with more than one verifier cannot be compiled", {}});
      if (m.fresh && !m.dest)
        out.push_back(Diagnostic{Severity::Error, "E-LOWER-FRESH-NODEST", m.range,
                                 "a fresh channel needs a destination agent to be compiled", {}});
    }
  }

  std::string fresh_nonce() {
    std::string name;
    do {
      name = "Nonce" + std::to_string(++counter_);
    } while (taken_.count(name));
    taken_.insert(name);
    nonces_.push_back(name);
    return name;
  }

  void lower(const Action& a, std::vector<Action>& out) {
    const ChannelMode& m = a.mode;
    if (!m.triple || (!m.auth && !m.dest)) {
      out.push_back(plain(a.sender, a.receiver, a.payload, a.range));
      return;
    }
    if (!m.auth) {
      out.push_back(plain(a.sender, a.receiver, Term::asym(a.payload, public_key(*m.dest)), a.range));
      return;
    }
    const Ident& auth = *m.auth;
    if (m.fresh) {
      Term nonce = Term::atom(fresh_nonce());
      out.push_back(plain(a.receiver, a.sender, Term::asym(Term::cat({atom(a.receiver), nonce}), public_key(auth)),
                          a.range));
      Term signed_part = Term::asym(Term::cat({nonce, a.payload}), signing_key(auth));
      out.push_back(plain(a.sender, a.receiver, Term::asym(signed_part, public_key(*m.dest)), a.range));
      return;
    }
    Term signed_part = Term::asym(Term::cat({atom(m.verifiers.at(0)), a.payload}), signing_key(auth));
    if (m.dest) signed_part = Term::asym(signed_part, public_key(*m.dest));
    out.push_back(plain(a.sender, a.receiver, signed_part, a.range));
  }

  void declare_builtins(ProtocolModel& out) const {
    std::set<std::string> used;
    auto scan = [&](const Term& t) {
      syntax::for_each_subterm(t, [&](const Term& s) {
        if (!s.name().empty()) used.insert(s.name());
      });
    };
    for (const auto& k : out.knowledge)
      for (const auto& t : k.terms) scan(t);
    for (const auto& a : out.actions) scan(a.payload);
    for (const auto& g : out.goals) scan(g.term);
    for (const auto& eq : out.equations) {
      scan(eq.lhs);
      scan(eq.rhs);
    }

    syntax::TypeDecl decl;
    decl.kind = DeclKind::Function;
    for (const char* fn : {"pk", "sk", "hash"}) {
      if (!used.count(fn) || out.find_decl(fn)) continue;
      decl.entries.push_back(syntax::DeclEntry{Ident{fn, {}}, std::nullopt, {}});
    }
    if (!decl.entries.empty()) out.types.push_back(std::move(decl));
  }

  const ProtocolModel& source_;
  std::set<std::string> taken_;
  std::vector<std::string> nonces_;
  int counter_ = 0;
};

}  // namespace

LoweringResult compile_channels(const ProtocolModel& model) { return Lowering(model).run(); }

SplitResult split_goals(const ProtocolModel& model) {
  SplitResult result;
  if (model.goals.empty()) {
    auto range = model.section_range(syntax::Section::Goals).value_or(model.name.range);
    result.diagnostics.push_back(
        Diagnostic{Severity::Error, "E-NO-GOALS", range, "protocol has no goals to split", {}});
    return result;
  }
  for (std::size_t i = 0; i < model.goals.size(); ++i) {
    ProtocolModel copy = model;
    copy.name.name = model.name.name + "_goal" + std::to_string(i + 1);
    copy.goals = {model.goals[i]};
    result.models.push_back(std::move(copy));
  }
  return result;
}

std::vector<std::filesystem::path> write_models(const std::vector<ProtocolModel>& models,
                                                const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> paths;
  for (const auto& m : models) {
    auto path = dir / (m.name.name + (m.dialect == syntax::Dialect::AnB ? ".AnB" : ".AnBx"));
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << syntax::pretty_print(m);
    if (!out.flush()) throw std::runtime_error("cannot write " + path.string());
    paths.push_back(std::move(path));
  }
  return paths;
}

}  // namespace anbx::transform
