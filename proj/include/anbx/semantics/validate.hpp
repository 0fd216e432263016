#pragma once

#include <vector>

#include "anbx/syntax/ast.hpp"
#include "anbx/syntax/source.hpp"

namespace anbx::semantics {

/// All semantic checks over a parsed model, ordered by span. Empty means
/// valid.
///
/// Codes: E-UNDECLARED, E-REDECLARED, E-ARITY, E-ARGTYPE, E-SYMKEY,
/// E-ASYMKEY, E-MODE-AGENT, E-MODE-AUTHVERS, E-AGENT-EXPECTED, E-GOAL-REF,
/// E-KNOWLEDGE, E-DIALECT, W-UNCERTIFIED, W-SELF-SEND.
///
/// The knowledge check asks, for each agent's first send, whether the
/// message is derivable from its initial knowledge, the messages it received
/// earlier, and the values it generates fresh. A declared constant that
/// occurs in no knowledge line and no earlier message counts as generated
/// by whoever sends it first.
std::vector<syntax::Diagnostic> validate(const syntax::ProtocolModel& model);

/// Replaces macro uses by their bodies with arguments substituted. Each
/// expanded term takes the span of the use site.
syntax::Term expand_term(const std::vector<syntax::Macro>& macros, const syntax::Term& t);

/// Copy of the model with every macro use expanded and Definitions dropped.
syntax::ProtocolModel expand_macros(const syntax::ProtocolModel& model);

/// Parse and, if parsing succeeded, validate. Parser warnings are kept.
std::vector<syntax::Diagnostic> check_source(const syntax::SourceFile& source);

}  // namespace anbx::semantics
