#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "anbx/syntax/ast.hpp"

namespace anbx::semantics {

/// Type of a term or symbol.
///
/// Function types carry a parameter list and a result. Functions declared
/// without a signature are `variadic`: any arity, Payload result.
struct SemanticType {
  enum class Kind { Agent, Number, SymmetricKey, PublicKey, PrivateKey, Payload, Fn };

  Kind kind = Kind::Payload;
  std::vector<Kind> params;
  Kind result = Kind::Payload;
  bool variadic = false;

  static SemanticType of(Kind k) { return SemanticType{k, {}, Kind::Payload, false}; }
  static SemanticType agent() { return of(Kind::Agent); }
  static SemanticType number() { return of(Kind::Number); }
  static SemanticType symmetric_key() { return of(Kind::SymmetricKey); }
  static SemanticType public_key() { return of(Kind::PublicKey); }
  static SemanticType private_key() { return of(Kind::PrivateKey); }
  static SemanticType payload() { return of(Kind::Payload); }
  static SemanticType fn(std::vector<Kind> params, Kind result) {
    return SemanticType{Kind::Fn, std::move(params), result, false};
  }
  static SemanticType untyped_fn() { return SemanticType{Kind::Fn, {}, Kind::Payload, true}; }

  bool is(Kind k) const { return kind == k; }

  friend bool operator==(const SemanticType&, const SemanticType&) = default;
};

std::string to_string(SemanticType::Kind k);
std::string to_string(const SemanticType& t);

SemanticType::Kind kind_of(syntax::SigType t);
SemanticType type_of_decl(syntax::DeclKind k);

/// A value of type `arg` may be passed where `param` is expected.
bool accepts(SemanticType::Kind param, const SemanticType& arg);

/// Predefined function symbols: pk, sk, inv, hash, exp, xor.
const std::map<std::string, SemanticType>& builtin_signatures();

/// Builtins that anyone can apply to known arguments (all except inv).
bool is_public_builtin(const std::string& name);

}  // namespace anbx::semantics
