#include "anbx/semantics/fixes.hpp"

#include "anbx/syntax/printer.hpp"

namespace anbx::semantics {

using syntax::DeclKind;
using syntax::Edit;
using syntax::SigType;

namespace {

SigType sig_of(SemanticType::Kind k) {
  switch (k) {
    case SemanticType::Kind::Agent: return SigType::Agent;
    case SemanticType::Kind::Number: return SigType::Number;
    case SemanticType::Kind::SymmetricKey: return SigType::SymmetricKey;
    case SemanticType::Kind::PublicKey: return SigType::PublicKey;
    case SemanticType::Kind::PrivateKey: return SigType::PrivateKey;
    default: return SigType::Payload;
  }
}

std::string type_label(DeclKind k) {
  switch (k) {
    case DeclKind::Agent: return "Agent";
    case DeclKind::Number: return "Number";
    case DeclKind::SymmetricKey: return "SymmetricKey";
    case DeclKind::PublicKey: return "PublicKey";
    case DeclKind::Function: return "Function";
  }
  return "";
}

}  // namespace

std::optional<Edit> retype_edit(const SymbolTable& table, const std::string& name, DeclKind to) {
  for (const auto& decl : table.decls) {
    for (std::size_t i = 0; i < decl.entries.size(); ++i) {
      if (decl.entries[i].name.name != name) continue;
      if (decl.kind == to) return std::nullopt;
      std::string label = "Change the type of '" + name + "' to " + type_label(to);
      std::string keyword(syntax::to_string(to, table.dialect));
      if (decl.entries.size() == 1 && !decl.entries[i].signature)
        return Edit{decl.keyword_range, keyword, label};
      syntax::TypeDecl rest = decl;
      rest.entries.erase(rest.entries.begin() + static_cast<std::ptrdiff_t>(i));
      std::string text = rest.entries.empty() ? keyword + " " + name
                                              : syntax::print_decl(rest, table.dialect) + ";\n  " +
                                                    keyword + " " + name;
      return Edit{decl.range, text, label};
    }
  }
  return std::nullopt;
}

std::optional<Edit> function_result_edit(const SymbolTable& table, const std::string& fn,
                                         SigType result) {
  std::string label = "Change the result type of '" + fn + "' to " + std::string(syntax::to_string(result));
  auto builtin = builtin_signatures().find(fn);
  for (const auto& decl : table.decls) {
    for (std::size_t i = 0; i < decl.entries.size(); ++i) {
      if (decl.entries[i].name.name != fn) continue;
      if (decl.kind != DeclKind::Function) return std::nullopt;
      syntax::TypeDecl changed = decl;
      auto& entry = changed.entries[i];
      if (!entry.signature) {
        if (builtin == builtin_signatures().end()) return std::nullopt;
        syntax::Signature sig;
        for (auto p : builtin->second.params) sig.params.push_back(sig_of(p));
        entry.signature = sig;
      }
      if (entry.signature->result == result) return std::nullopt;
      entry.signature->result = result;
      return Edit{decl.range, syntax::print_decl(changed, table.dialect), label};
    }
  }
  if (builtin == builtin_signatures().end()) return std::nullopt;
  syntax::Signature sig;
  for (auto p : builtin->second.params) sig.params.push_back(sig_of(p));
  sig.result = result;
  syntax::TypeDecl decl{DeclKind::Function, {syntax::DeclEntry{{fn, {}}, sig, {}}}, {}, {}};
  syntax::SourceRange at = table.types_end;
  at.begin = at.end;
  at.start = at.stop;
  return Edit{at, ";\n  " + syntax::print_decl(decl, table.dialect), label};
}

}  // namespace anbx::semantics
