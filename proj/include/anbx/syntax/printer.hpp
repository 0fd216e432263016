#pragma once

#include <string>

#include "anbx/syntax/ast.hpp"

namespace anbx::syntax {

/// Canonical text of a model.
///
/// One declaration per line, two-space indentation within sections, a blank
/// line between sections, `A -> B : M` for actions. Terms print without
/// spaces after commas. In the AnB dialect symmetric keys are spelled
/// `Symmetric_key`.
std::string pretty_print(const ProtocolModel& model, Dialect dialect);
inline std::string pretty_print(const ProtocolModel& model) {
  return pretty_print(model, model.dialect);
}

std::string print_term(const Term& t);
std::string print_mode(const ChannelMode& mode);
std::string print_goal(const Goal& g);
std::string print_action(const Action& a);
std::string print_decl(const TypeDecl& d, Dialect dialect);

}  // namespace anbx::syntax
