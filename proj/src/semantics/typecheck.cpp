#include "anbx/semantics/typecheck.hpp"

#include "anbx/semantics/fixes.hpp"
#include "anbx/syntax/printer.hpp"

namespace anbx::semantics {

using syntax::Diagnostic;
using syntax::Edit;
using syntax::Severity;
using syntax::Term;
using Kind = SemanticType::Kind;

namespace {

constexpr int kMaxMacroDepth = 64;

class Checker {
 public:
  Checker(const SymbolTable& table, std::vector<Diagnostic>& out) : table_(table), out_(out) {}

  SemanticType type(const Term& t, int depth = 0) {
    switch (t.kind()) {
      case Term::Kind::Atom: return atom(t, depth);
      case Term::Kind::Apply: return apply(t, depth);
      case Term::Kind::Cat:
        for (const auto& c : t.children()) type(c, depth);
        return SemanticType::payload();
      case Term::Kind::SymEnc: return sym(t, depth);
      case Term::Kind::AsymEnc: return asym(t, depth);
    }
    return SemanticType::payload();
  }

 private:
  void error(std::string code, syntax::SourceRange r, std::string msg, std::vector<Edit> fixes = {}) {
    out_.push_back(Diagnostic{Severity::Error, std::move(code), r, std::move(msg), std::move(fixes)});
  }

  const SymbolInfo* resolve(const std::string& name, syntax::SourceRange r) {
    const SymbolInfo* s = table_.lookup(name);
    if (!s) error("E-UNDECLARED", r, "'" + name + "' is not declared");
    return s;
  }

  SemanticType atom(const Term& t, int depth) {
    const SymbolInfo* s = resolve(t.name(), t.range());
    if (!s) return SemanticType::payload();
    if (s->kind == SymbolKind::Macro) {
      const auto& mac = table_.macros().at(static_cast<std::size_t>(s->macro_index));
      if (mac.params.empty()) return expand(mac, {}, t, depth);
    }
    return s->type;
  }

  SemanticType apply(const Term& t, int depth) {
    std::vector<SemanticType> args;
    for (const auto& a : t.children()) args.push_back(type(a, depth));

    const SymbolInfo* s = resolve(t.name(), t.range());
    if (!s) return SemanticType::payload();
    if (s->kind == SymbolKind::Macro) {
      const auto& mac = table_.macros().at(static_cast<std::size_t>(s->macro_index));
      if (mac.params.size() != args.size()) {
        error("E-ARITY", t.range(),
              "macro '" + t.name() + "' expects " + std::to_string(mac.params.size()) +
                  " argument(s), got " + std::to_string(args.size()));
        return SemanticType::payload();
      }
      return expand(mac, args, t, depth);
    }
    const SemanticType& fn = s->type;
    if (!fn.is(Kind::Fn)) {
      error("E-ARITY", t.range(), "'" + t.name() + "' is a " + to_string(fn) + ", not a function");
      return SemanticType::payload();
    }
    if (fn.variadic) return SemanticType::payload();
    if (fn.params.size() != args.size()) {
      error("E-ARITY", t.range(),
            "'" + t.name() + "' expects " + std::to_string(fn.params.size()) + " argument(s), got " +
                std::to_string(args.size()));
      return SemanticType::of(fn.result);
    }
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (!accepts(fn.params[i], args[i])) {
        error("E-ARGTYPE", t.children()[i].range(),
              "argument " + std::to_string(i + 1) + " of '" + t.name() + "' must be " +
                  to_string(fn.params[i]) + ", found " + to_string(args[i]));
      }
    }
    return SemanticType::of(fn.result);
  }

  SemanticType expand(const syntax::Macro& mac, const std::vector<SemanticType>& args, const Term& use,
                      int depth) {
    if (depth >= kMaxMacroDepth) {
      error("E-ARITY", use.range(), "macro '" + mac.name.name + "' expands too deeply");
      return SemanticType::payload();
    }
    SymbolTable inner = table_;
    inner.push_scope();
    for (std::size_t i = 0; i < mac.params.size(); ++i)
      inner.declare(SymbolInfo{mac.params[i].name, args[i], mac.params[i].range, SymbolKind::MacroParam, -1});
    std::vector<Diagnostic> body_diags;
    SemanticType result = Checker(inner, body_diags).type(mac.body, depth + 1);
    for (auto& d : body_diags) {
      // Body spans point into Definitions; report at the call site instead.
      error(d.code, use.range(), "in expansion of '" + mac.name.name + "': " + d.message);
    }
    return result;
  }

  SemanticType sym(const Term& t, int depth) {
    type(t.payload(), depth);
    SemanticType key = type(t.key(), depth);
    if (key.is(Kind::SymmetricKey) || key.is(Kind::Payload)) return SemanticType::payload();

    std::vector<Edit> fixes;
    if (auto e = key_retype(t.key(), syntax::DeclKind::SymmetricKey, syntax::SigType::SymmetricKey)) fixes.push_back(*e);
    if (key.is(Kind::PublicKey) || key.is(Kind::PrivateKey)) {
      fixes.push_back(Edit{t.range(), syntax::print_term(Term::asym(t.payload(), t.key())),
                           "Use asymmetric encryption"});
    }
    error("E-SYMKEY", t.key().range(),
          "symmetric encryption needs a SymmetricKey, found " + to_string(key), std::move(fixes));
    return SemanticType::payload();
  }

  SemanticType asym(const Term& t, int depth) {
    type(t.payload(), depth);
    SemanticType key = type(t.key(), depth);
    if (key.is(Kind::PublicKey) || key.is(Kind::PrivateKey) || key.is(Kind::Payload))
      return SemanticType::payload();

    std::vector<Edit> fixes;
    if (auto e = key_retype(t.key(), syntax::DeclKind::PublicKey, syntax::SigType::PublicKey)) fixes.push_back(*e);
    if (key.is(Kind::SymmetricKey)) {
      fixes.push_back(Edit{t.range(), syntax::print_term(Term::sym(t.payload(), t.key())),
                           "Use symmetric encryption"});
    }
    error("E-ASYMKEY", t.key().range(),
          "asymmetric encryption needs a PublicKey or PrivateKey, found " + to_string(key), std::move(fixes));
    return SemanticType::payload();
  }

  std::optional<Edit> key_retype(const Term& key, syntax::DeclKind decl, syntax::SigType sig) {
    const SymbolInfo* s = table_.lookup(key.name());
    if (!s) return std::nullopt;
    if (key.is(Term::Kind::Atom) && s->kind == SymbolKind::Declared) return retype_edit(table_, key.name(), decl);
    if (key.is(Term::Kind::Apply) && (s->kind == SymbolKind::Declared || s->kind == SymbolKind::Builtin) &&
        s->type.is(Kind::Fn) && !s->type.variadic)
      return function_result_edit(table_, key.name(), sig);
    return std::nullopt;
  }

  const SymbolTable& table_;
  std::vector<Diagnostic>& out_;
};

}  // namespace

SemanticType check_term(const SymbolTable& table, const Term& term, std::vector<Diagnostic>& out) {
  return Checker(table, out).type(term);
}

TypeResult infer_term_type(const SymbolTable& table, const Term& term) {
  std::vector<Diagnostic> diags;
  SemanticType t = check_term(table, term, diags);
  if (!diags.empty()) return diags.front();
  return t;
}

}  // namespace anbx::semantics
