#include "anbx/semantics/types.hpp"

namespace anbx::semantics {

using Kind = SemanticType::Kind;

std::string to_string(Kind k) {
  switch (k) {
    case Kind::Agent: return "Agent";
    case Kind::Number: return "Number";
    case Kind::SymmetricKey: return "SymmetricKey";
    case Kind::PublicKey: return "PublicKey";
    case Kind::PrivateKey: return "PrivateKey";
    case Kind::Payload: return "Payload";
    case Kind::Fn: return "Function";
  }
  return "Payload";
}

std::string to_string(const SemanticType& t) {
  if (!t.is(Kind::Fn)) return to_string(t.kind);
  if (t.variadic) return "Function";
  std::string out = "Fn(";
  for (std::size_t i = 0; i < t.params.size(); ++i) {
    if (i) out += ',';
    out += to_string(t.params[i]);
  }
  out += " -> " + to_string(t.result) + ")";
  return out;
}

Kind kind_of(syntax::SigType t) {
  switch (t) {
    case syntax::SigType::Agent: return Kind::Agent;
    case syntax::SigType::Number: return Kind::Number;
    case syntax::SigType::SymmetricKey: return Kind::SymmetricKey;
    case syntax::SigType::PublicKey: return Kind::PublicKey;
    case syntax::SigType::PrivateKey: return Kind::PrivateKey;
    case syntax::SigType::Payload: return Kind::Payload;
  }
  return Kind::Payload;
}

SemanticType type_of_decl(syntax::DeclKind k) {
  switch (k) {
    case syntax::DeclKind::Agent: return SemanticType::agent();
    case syntax::DeclKind::Number: return SemanticType::number();
    case syntax::DeclKind::SymmetricKey: return SemanticType::symmetric_key();
    case syntax::DeclKind::PublicKey: return SemanticType::public_key();
    case syntax::DeclKind::Function: return SemanticType::untyped_fn();
  }
  return SemanticType::payload();
}

bool accepts(Kind param, const SemanticType& arg) {
  if (param == Kind::Payload) return true;
  return !arg.is(Kind::Fn) && arg.kind == param;
}

const std::map<std::string, SemanticType>& builtin_signatures() {
  static const std::map<std::string, SemanticType> sigs = {
      {"pk", SemanticType::fn({Kind::Agent}, Kind::PublicKey)},
      {"sk", SemanticType::fn({Kind::Agent}, Kind::PublicKey)},
      {"inv", SemanticType::fn({Kind::PublicKey}, Kind::PrivateKey)},
      {"hash", SemanticType::fn({Kind::Payload}, Kind::Number)},
      {"exp", SemanticType::fn({Kind::Payload, Kind::Payload}, Kind::Payload)},
      {"xor", SemanticType::fn({Kind::Payload, Kind::Payload}, Kind::Payload)},
  };
  return sigs;
}

bool is_public_builtin(const std::string& name) {
  return name != "inv" && builtin_signatures().count(name) > 0;
}

}  // namespace anbx::semantics
