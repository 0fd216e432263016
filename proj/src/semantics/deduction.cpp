#include "anbx/semantics/deduction.hpp"

#include <vector>

namespace anbx::semantics {

using syntax::Term;

Term normalize(const Term& t) {
  if (t.is(Term::Kind::Atom)) return Term::atom(t.name());
  std::vector<Term> kids;
  for (const auto& c : t.children()) kids.push_back(normalize(c));
  switch (t.kind()) {
    case Term::Kind::Apply:
      if (t.name() == "inv" && kids.size() == 1 && kids[0].is(Term::Kind::Apply) &&
          kids[0].name() == "inv" && kids[0].children().size() == 1)
        return kids[0].children()[0];
      return Term::apply(t.name(), std::move(kids));
    case Term::Kind::Cat: return Term::cat(std::move(kids));
    case Term::Kind::SymEnc: return Term::sym(kids[0], kids[1]);
    case Term::Kind::AsymEnc: return Term::asym(kids[0], kids[1]);
    case Term::Kind::Atom: break;
  }
  return t;
}

Term decryption_key(const Term& key) {
  if (key.is(Term::Kind::Apply) && key.name() == "inv" && key.children().size() == 1)
    return key.children()[0];
  return Term::apply("inv", {key});
}

KnowledgeSet::KnowledgeSet(std::set<std::string> public_functions) : public_(std::move(public_functions)) {}

void KnowledgeSet::add(const Term& t) {
  if (known_.insert(normalize(t)).second) saturate();
}

void KnowledgeSet::saturate() {
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Term> found;
    for (const auto& t : known_) {
      switch (t.kind()) {
        case Term::Kind::Cat:
          for (const auto& c : t.children())
            if (!known_.count(c)) found.push_back(c);
          break;
        case Term::Kind::SymEnc:
          if (!known_.count(t.payload()) && can_derive(t.key())) found.push_back(t.payload());
          break;
        case Term::Kind::AsymEnc:
          if (!known_.count(t.payload()) && can_derive(normalize(decryption_key(t.key()))))
            found.push_back(t.payload());
          break;
        default: break;
      }
    }
    for (auto& f : found) changed |= known_.insert(std::move(f)).second;
  }
}

bool KnowledgeSet::can_derive(const Term& raw) const {
  Term t = normalize(raw);
  if (known_.count(t)) return true;
  switch (t.kind()) {
    case Term::Kind::Atom: return public_.count(t.name()) > 0;
    case Term::Kind::Apply:
      if (!public_.count(t.name())) return false;
      for (const auto& c : t.children())
        if (!can_derive(c)) return false;
      return true;
    case Term::Kind::Cat:
      for (const auto& c : t.children())
        if (!can_derive(c)) return false;
      return true;
    case Term::Kind::SymEnc:
    case Term::Kind::AsymEnc: return can_derive(t.payload()) && can_derive(t.key());
  }
  return false;
}

}  // namespace anbx::semantics
