#pragma once

#include <optional>
#include <string>

#include "anbx/semantics/symbols.hpp"

namespace anbx::semantics {

/// Edit that changes the declared kind of `name` in the Types section.
/// Empty if `name` is not declared there.
std::optional<syntax::Edit> retype_edit(const SymbolTable& table, const std::string& name,
                                        syntax::DeclKind to);

/// Edit that gives function `fn` the result type `result`, keeping its
/// parameter list. Works for declared functions with a signature and for
/// builtins (declared or not).
std::optional<syntax::Edit> function_result_edit(const SymbolTable& table, const std::string& fn,
                                                 syntax::SigType result);

}  // namespace anbx::semantics
