#pragma once

#include <string>
#include <vector>

#include "anbx/syntax/ast.hpp"

namespace anbx::syntax {

struct OutlineNode {
  std::string label;
  SourceRange range;
  std::vector<OutlineNode> children;
};

/// One root per section present in the model (the Protocol header excluded).
/// Types lists one child per declaration line, plus one for Certified.
std::vector<OutlineNode> outline(const ProtocolModel& model);

}  // namespace anbx::syntax
