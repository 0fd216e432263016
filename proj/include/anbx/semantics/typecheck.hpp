#pragma once

#include <variant>
#include <vector>

#include "anbx/semantics/symbols.hpp"

namespace anbx::semantics {

using TypeResult = std::variant<SemanticType, syntax::Diagnostic>;

/// Bottom-up type of a term, or the first type error found in it
/// (E-UNDECLARED, E-ARITY, E-ARGTYPE, E-SYMKEY, E-ASYMKEY).
///
/// Symmetric keys must be SymmetricKey and asymmetric keys PublicKey or
/// PrivateKey. A Payload-typed key (result of exp/xor, an unsigned function,
/// a macro) is statically unknown and accepted by both cipher forms.
/// Macro applications are checked by typing the body with the parameters
/// bound to the argument types.
TypeResult infer_term_type(const SymbolTable& table, const syntax::Term& term);

/// Like infer_term_type but keeps going after an error, appending every
/// diagnostic to `out`. Ill-typed subterms are treated as Payload.
SemanticType check_term(const SymbolTable& table, const syntax::Term& term,
                        std::vector<syntax::Diagnostic>& out);

}  // namespace anbx::semantics
