#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "anbx/semantics/types.hpp"
#include "anbx/syntax/ast.hpp"

namespace anbx::semantics {

enum class SymbolKind { Declared, Builtin, MacroParam, Macro, EquationVar };

struct SymbolInfo {
  std::string name;
  SemanticType type;
  syntax::SourceRange decl_range;
  SymbolKind kind = SymbolKind::Declared;
  int macro_index = -1;  // into SymbolTable::macros() for kind == Macro
};

/// Lexically scoped symbols. Inner scopes shadow outer ones; lookup walks
/// from the innermost scope outwards.
class SymbolTable {
 public:
  void push_scope() { scopes_.emplace_back(); }
  void pop_scope() { scopes_.pop_back(); }
  std::size_t depth() const { return scopes_.size(); }

  /// False if the name already exists in the innermost scope.
  bool declare(SymbolInfo info);
  const SymbolInfo* lookup(std::string_view name) const;
  /// Innermost-scope lookup only.
  const SymbolInfo* lookup_local(std::string_view name) const;

  /// Every visible name, innermost scope first, declaration order within a
  /// scope, shadowed names omitted. Builtins come last.
  std::vector<const SymbolInfo*> visible() const;

  std::vector<syntax::Macro>& macros() { return macros_; }
  const std::vector<syntax::Macro>& macros() const { return macros_; }

  // Source-level context used to synthesise quick fixes.
  std::vector<syntax::TypeDecl> decls;
  syntax::SourceRange types_end;
  syntax::Dialect dialect = syntax::Dialect::AnBx;

 private:
  std::vector<std::vector<SymbolInfo>> scopes_;
  std::vector<syntax::Macro> macros_;
};

/// An identifier occurrence and the declaration it resolves to.
struct Binding {
  syntax::SourceRange occurrence;
  std::string name;
  SymbolInfo target;
};

struct ScopeResolution {
  /// Builtin scope plus the global declaration scope.
  SymbolTable table;
  std::vector<Binding> bindings;
  std::vector<syntax::Diagnostic> diagnostics;

  bool ok() const { return !syntax::has_errors(diagnostics); }
};

/// Binds every identifier occurrence in the model.
/// Codes: E-UNDECLARED (with a nearest-name quick fix), E-REDECLARED.
ScopeResolution resolve_scopes(const syntax::ProtocolModel& model);

/// Levenshtein distance.
std::size_t edit_distance(std::string_view a, std::string_view b);

}  // namespace anbx::semantics
