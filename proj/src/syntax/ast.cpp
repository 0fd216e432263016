#include "anbx/syntax/ast.hpp"

#include <algorithm>
#include <tuple>

namespace anbx::syntax {

Term Term::atom(std::string name, SourceRange range) {
  Term t;
  t.kind_ = Kind::Atom;
  t.name_ = std::move(name);
  t.range_ = range;
  return t;
}

Term Term::apply(std::string fn, std::vector<Term> args, SourceRange range) {
  Term t;
  t.kind_ = Kind::Apply;
  t.name_ = std::move(fn);
  t.children_ = std::move(args);
  t.range_ = range;
  return t;
}

Term Term::asym(Term payload, Term key, SourceRange range) {
  Term t;
  t.kind_ = Kind::AsymEnc;
  t.children_.push_back(std::move(payload));
  t.children_.push_back(std::move(key));
  t.range_ = range;
  return t;
}

Term Term::sym(Term payload, Term key, SourceRange range) {
  Term t = asym(std::move(payload), std::move(key), range);
  t.kind_ = Kind::SymEnc;
  return t;
}

Term Term::cat(std::vector<Term> items, SourceRange range) {
  if (items.size() == 1) {
    Term only = std::move(items.front());
    return only;
  }
  Term t;
  t.kind_ = Kind::Cat;
  t.children_ = std::move(items);
  t.range_ = range;
  return t;
}

bool operator==(const Term& a, const Term& b) {
  return a.kind_ == b.kind_ && a.name_ == b.name_ && a.children_ == b.children_;
}

bool operator<(const Term& a, const Term& b) {
  if (a.kind_ != b.kind_) return a.kind_ < b.kind_;
  if (a.name_ != b.name_) return a.name_ < b.name_;
  return std::lexicographical_compare(a.children_.begin(), a.children_.end(),
                                      b.children_.begin(), b.children_.end());
}

std::string_view to_string(DeclKind k, Dialect d) {
  switch (k) {
    case DeclKind::Agent: return "Agent";
    case DeclKind::Number: return "Number";
    case DeclKind::SymmetricKey: return d == Dialect::AnB ? "Symmetric_key" : "SymmetricKey";
    case DeclKind::PublicKey: return "PublicKey";
    case DeclKind::Function: return "Function";
  }
  return "Agent";
}

std::string_view to_string(SigType t) {
  switch (t) {
    case SigType::Agent: return "Agent";
    case SigType::Number: return "Number";
    case SigType::SymmetricKey: return "SymmetricKey";
    case SigType::PublicKey: return "PublicKey";
    case SigType::PrivateKey: return "PrivateKey";
    case SigType::Payload: return "Payload";
  }
  return "Payload";
}

std::string_view to_string(Section s) {
  switch (s) {
    case Section::Protocol: return "Protocol";
    case Section::Types: return "Types";
    case Section::Definitions: return "Definitions";
    case Section::Equations: return "Equations";
    case Section::Knowledge: return "Knowledge";
    case Section::Actions: return "Actions";
    case Section::Goals: return "Goals";
  }
  return "Protocol";
}

std::optional<SourceRange> ProtocolModel::section_range(Section s) const {
  for (const auto& [sec, r] : section_ranges)
    if (sec == s) return r;
  return std::nullopt;
}

const DeclEntry* ProtocolModel::find_decl(std::string_view name, DeclKind* kind) const {
  for (const auto& d : types) {
    for (const auto& e : d.entries) {
      if (e.name.name == name) {
        if (kind) *kind = d.kind;
        return &e;
      }
    }
  }
  return nullptr;
}

bool ProtocolModel::is_certified(std::string_view agent) const {
  return std::any_of(certified.begin(), certified.end(),
                     [&](const Ident& i) { return i.name == agent; });
}

}  // namespace anbx::syntax
