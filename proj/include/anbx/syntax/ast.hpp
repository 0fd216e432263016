#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "anbx/syntax/source.hpp"

namespace anbx::syntax {

// Equality on every AST node is structural: source ranges never participate.

struct Ident {
  std::string name;
  SourceRange range;

  friend bool operator==(const Ident& a, const Ident& b) { return a.name == b.name; }
};

/// A protocol message term.
///
/// Stored as a tagged node with a child vector: Apply keeps its arguments,
/// Cat its items (two or more), and the two cipher forms keep
/// [payload, key].
class Term {
 public:
  enum class Kind { Atom, Apply, AsymEnc, SymEnc, Cat };

  static Term atom(std::string name, SourceRange range = {});
  static Term apply(std::string fn, std::vector<Term> args, SourceRange range = {});
  static Term asym(Term payload, Term key, SourceRange range = {});
  static Term sym(Term payload, Term key, SourceRange range = {});
  /// Flattening is not performed: nested Cat items stay nested.
  static Term cat(std::vector<Term> items, SourceRange range = {});

  Kind kind() const { return kind_; }
  bool is(Kind k) const { return kind_ == k; }
  /// Atom identifier or Apply function name; empty otherwise.
  const std::string& name() const { return name_; }
  const std::vector<Term>& children() const { return children_; }
  std::vector<Term>& children() { return children_; }
  const Term& payload() const { return children_.at(0); }
  const Term& key() const { return children_.at(1); }
  const SourceRange& range() const { return range_; }
  void set_range(SourceRange r) { range_ = r; }

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator<(const Term& a, const Term& b);

 private:
  Kind kind_ = Kind::Atom;
  std::string name_;
  std::vector<Term> children_;
  SourceRange range_;
};

/// Visits t and every subterm, parents first.
template <typename F>
void for_each_subterm(const Term& t, F&& f) {
  f(t);
  for (const auto& c : t.children()) for_each_subterm(c, f);
}

struct ChannelMode {
  bool triple = false;
  bool fresh = false;
  std::optional<Ident> auth;
  std::vector<Ident> verifiers;
  std::optional<Ident> dest;
  // Slot ranges cover the slot text, or are empty at the slot position.
  SourceRange auth_range;
  SourceRange verifiers_range;
  SourceRange dest_range;
  SourceRange range;

  static ChannelMode plain() { return {}; }

  friend bool operator==(const ChannelMode& a, const ChannelMode& b) {
    return a.triple == b.triple && a.fresh == b.fresh && a.auth == b.auth &&
           a.verifiers == b.verifiers && a.dest == b.dest;
  }
};

struct Action {
  Ident sender;
  Ident receiver;
  ChannelMode mode;
  Term payload;
  SourceRange range;

  friend bool operator==(const Action& a, const Action& b) {
    return a.sender == b.sender && a.receiver == b.receiver && a.mode == b.mode &&
           a.payload == b.payload;
  }
};

struct Goal {
  enum class Kind { WeakAuth, Auth, Secrecy };
  Kind kind = Kind::Secrecy;
  Ident verifier;  // authentication goals only
  Ident peer;      // authentication goals only
  Term term;
  std::vector<Ident> parties;  // secrecy goals only
  SourceRange range;

  friend bool operator==(const Goal& a, const Goal& b) {
    if (a.kind != b.kind || !(a.term == b.term)) return false;
    if (a.kind == Kind::Secrecy) return a.parties == b.parties;
    return a.verifier == b.verifier && a.peer == b.peer;
  }
};

/// Declarable kinds in the Types section.
enum class DeclKind { Agent, Number, SymmetricKey, PublicKey, Function };

/// Types usable in function signatures.
enum class SigType { Agent, Number, SymmetricKey, PublicKey, PrivateKey, Payload };

std::string_view to_string(DeclKind k, Dialect d = Dialect::AnBx);
std::string_view to_string(SigType t);

struct Signature {
  std::vector<SigType> params;
  SigType result = SigType::Payload;

  friend bool operator==(const Signature&, const Signature&) = default;
};

struct DeclEntry {
  Ident name;
  std::optional<Signature> signature;  // Function entries only
  SourceRange range;

  friend bool operator==(const DeclEntry& a, const DeclEntry& b) {
    return a.name == b.name && a.signature == b.signature;
  }
};

struct TypeDecl {
  DeclKind kind = DeclKind::Agent;
  std::vector<DeclEntry> entries;
  SourceRange keyword_range;
  SourceRange range;

  friend bool operator==(const TypeDecl& a, const TypeDecl& b) {
    return a.kind == b.kind && a.entries == b.entries;
  }
};

struct KnowledgeEntry {
  Ident agent;
  std::vector<Term> terms;
  SourceRange range;

  friend bool operator==(const KnowledgeEntry& a, const KnowledgeEntry& b) {
    return a.agent == b.agent && a.terms == b.terms;
  }
};

struct Macro {
  Ident name;
  std::vector<Ident> params;
  Term body;
  SourceRange range;

  friend bool operator==(const Macro& a, const Macro& b) {
    return a.name == b.name && a.params == b.params && a.body == b.body;
  }
};

struct Equation {
  Term lhs;
  Term rhs;
  SourceRange range;

  friend bool operator==(const Equation& a, const Equation& b) {
    return a.lhs == b.lhs && a.rhs == b.rhs;
  }
};

enum class Section { Protocol, Types, Definitions, Equations, Knowledge, Actions, Goals };

std::string_view to_string(Section s);

struct ProtocolModel {
  Ident name;
  Dialect dialect = Dialect::AnBx;
  std::vector<TypeDecl> types;
  std::vector<Ident> certified;
  SourceRange certified_range;
  std::vector<Macro> definitions;
  std::vector<Equation> equations;
  std::vector<KnowledgeEntry> knowledge;
  std::vector<Action> actions;
  std::vector<Goal> goals;

  /// Header-to-last-entry ranges of the sections present in the source.
  std::vector<std::pair<Section, SourceRange>> section_ranges;
  /// End of the last Types entry; insertion point for new declarations.
  SourceRange types_end;

  std::optional<SourceRange> section_range(Section s) const;

  /// Declaration entry for a name, if declared in Types.
  const DeclEntry* find_decl(std::string_view name, DeclKind* kind = nullptr) const;
  bool is_certified(std::string_view agent) const;

  friend bool operator==(const ProtocolModel& a, const ProtocolModel& b) {
    return a.name == b.name && a.dialect == b.dialect && a.types == b.types &&
           a.certified == b.certified && a.definitions == b.definitions &&
           a.equations == b.equations && a.knowledge == b.knowledge &&
           a.actions == b.actions && a.goals == b.goals;
  }
};

}  // namespace anbx::syntax
