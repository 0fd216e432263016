#pragma once

#include <optional>
#include <vector>

#include "anbx/syntax/ast.hpp"
#include "anbx/syntax/source.hpp"

namespace anbx::syntax {

struct ParseResult {
  std::optional<ProtocolModel> model;
  /// Errors when model is empty; otherwise warnings such as W-NO-GOALS.
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return model.has_value(); }
};

/// Parses an AnB or AnBx protocol.
///
/// Section order is fixed: Protocol, Types, Definitions?, Equations?,
/// Knowledge, Actions, Goals?. Parsing stops at the first syntax error.
/// Error codes: E-PARSE, E-SECTION-MISSING, E-SECTION-ORDER, E-DIALECT.
/// Never throws on malformed input.
ParseResult parse(const SourceFile& source);

/// Parses a single term; used by tests and tooling.
std::optional<Term> parse_term(std::string_view text, std::vector<Diagnostic>* diags = nullptr);

/// Terms nested deeper than this are rejected with E-PARSE.
inline constexpr int kMaxNesting = 200;

}  // namespace anbx::syntax
