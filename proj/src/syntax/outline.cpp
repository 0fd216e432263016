#include "anbx/syntax/outline.hpp"

#include "anbx/syntax/printer.hpp"

namespace anbx::syntax {

std::vector<OutlineNode> outline(const ProtocolModel& model) {
  std::vector<OutlineNode> roots;
  auto section = [&](Section s) -> OutlineNode* {
    auto r = model.section_range(s);
    if (!r) return nullptr;
    roots.push_back(OutlineNode{std::string(to_string(s)), *r, {}});
    return &roots.back();
  };

  if (OutlineNode* types = section(Section::Types)) {
    for (const auto& d : model.types)
      types->children.push_back({print_decl(d, model.dialect), d.range, {}});
    if (!model.certified.empty()) {
      std::string label = "Certified";
      for (std::size_t i = 0; i < model.certified.size(); ++i)
        label += (i ? "," : " ") + model.certified[i].name;
      types->children.push_back({label, model.certified_range, {}});
    }
  }
  if (OutlineNode* defs = section(Section::Definitions)) {
    for (const auto& m : model.definitions) defs->children.push_back({m.name.name, m.range, {}});
  }
  if (OutlineNode* eqs = section(Section::Equations)) {
    for (const auto& e : model.equations)
      eqs->children.push_back({print_term(e.lhs) + " = " + print_term(e.rhs), e.range, {}});
  }
  if (OutlineNode* know = section(Section::Knowledge)) {
    for (const auto& k : model.knowledge) know->children.push_back({k.agent.name, k.range, {}});
  }
  if (OutlineNode* acts = section(Section::Actions)) {
    for (const auto& a : model.actions) acts->children.push_back({print_action(a), a.range, {}});
  }
  if (OutlineNode* goals = section(Section::Goals)) {
    for (const auto& g : model.goals) goals->children.push_back({print_goal(g), g.range, {}});
  }
  return roots;
}

}  // namespace anbx::syntax
