#include "anbx/syntax/printer.hpp"

#include <sstream>

namespace anbx::syntax {
namespace {

void print_into(std::string& out, const Term& t, bool grouped);

// A Cat that is an argument, key, list item or nested item needs parentheses.
void print_nested(std::string& out, const Term& t) { print_into(out, t, true); }

void print_into(std::string& out, const Term& t, bool grouped) {
  switch (t.kind()) {
    case Term::Kind::Atom:
      out += t.name();
      return;
    case Term::Kind::Apply: {
      out += t.name();
      out += '(';
      bool first = true;
      for (const auto& a : t.children()) {
        if (!first) out += ',';
        first = false;
        print_nested(out, a);
      }
      out += ')';
      return;
    }
    case Term::Kind::AsymEnc:
      out += '{';
      print_into(out, t.payload(), false);
      out += '}';
      print_nested(out, t.key());
      return;
    case Term::Kind::SymEnc:
      out += "{|";
      print_into(out, t.payload(), false);
      out += "|}";
      print_nested(out, t.key());
      return;
    case Term::Kind::Cat: {
      if (grouped) out += '(';
      bool first = true;
      for (const auto& item : t.children()) {
        if (!first) out += ',';
        first = false;
        print_nested(out, item);
      }
      if (grouped) out += ')';
      return;
    }
  }
}

std::string join_idents(const std::vector<Ident>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ',';
    out += ids[i].name;
  }
  return out;
}

std::string print_signature(const Signature& sig) {
  std::string out;
  for (std::size_t i = 0; i < sig.params.size(); ++i) {
    if (i) out += ',';
    out += to_string(sig.params[i]);
  }
  if (!sig.params.empty()) out += ' ';
  out += "-> ";
  out += to_string(sig.result);
  return out;
}

// Emits "  line" entries separated by ";\n", the last one without ';'.
void emit_entries(std::ostringstream& out, const std::vector<std::string>& lines) {
  for (std::size_t i = 0; i < lines.size(); ++i) {
    out << "  " << lines[i];
    if (i + 1 < lines.size()) out << ';';
    out << '\n';
  }
}

}  // namespace

std::string print_term(const Term& t) {
  std::string out;
  print_into(out, t, false);
  return out;
}

std::string print_mode(const ChannelMode& mode) {
  if (!mode.triple) return {};
  std::string out;
  if (mode.fresh) out += '@';
  out += '(';
  out += mode.auth ? mode.auth->name : "-";
  out += '|';
  out += mode.verifiers.empty() ? "-" : join_idents(mode.verifiers);
  out += '|';
  out += mode.dest ? mode.dest->name : "-";
  out += ')';
  return out;
}

std::string print_action(const Action& a) {
  std::string out = a.sender.name + " -> " + a.receiver.name;
  if (a.mode.triple) out += "," + print_mode(a.mode);
  out += " : ";
  out += print_term(a.payload);
  return out;
}

std::string print_goal(const Goal& g) {
  switch (g.kind) {
    case Goal::Kind::WeakAuth:
      return g.verifier.name + " weakly authenticates " + g.peer.name + " on " + print_term(g.term);
    case Goal::Kind::Auth:
      return g.verifier.name + " authenticates " + g.peer.name + " on " + print_term(g.term);
    case Goal::Kind::Secrecy:
      return print_term(g.term) + " secret between " + join_idents(g.parties);
  }
  return {};
}

std::string print_decl(const TypeDecl& d, Dialect dialect) {
  std::string out(to_string(d.kind, dialect));
  out += ' ';
  for (std::size_t i = 0; i < d.entries.size(); ++i) {
    if (i) out += ',';
    out += d.entries[i].name.name;
    if (d.entries[i].signature) out += ": " + print_signature(*d.entries[i].signature);
  }
  return out;
}

std::string pretty_print(const ProtocolModel& model, Dialect dialect) {
  std::ostringstream out;
  out << "Protocol: " << model.name.name << "\n\n";

  out << "Types:\n";
  std::vector<std::string> lines;
  for (const auto& d : model.types) lines.push_back(print_decl(d, dialect));
  if (!model.certified.empty()) lines.push_back("Certified " + join_idents(model.certified));
  emit_entries(out, lines);

  if (!model.definitions.empty()) {
    out << "\nDefinitions:\n";
    lines.clear();
    for (const auto& m : model.definitions) {
      std::string line = m.name.name;
      if (!m.params.empty()) line += "(" + join_idents(m.params) + ")";
      line += " = " + print_term(m.body);
      lines.push_back(std::move(line));
    }
    emit_entries(out, lines);
  }

  if (!model.equations.empty()) {
    out << "\nEquations:\n";
    lines.clear();
    for (const auto& e : model.equations) lines.push_back(print_term(e.lhs) + " = " + print_term(e.rhs));
    emit_entries(out, lines);
  }

  out << "\nKnowledge:\n";
  lines.clear();
  for (const auto& k : model.knowledge) {
    std::string line = k.agent.name + ": ";
    for (std::size_t i = 0; i < k.terms.size(); ++i) {
      if (i) line += ',';
      std::string item;
      print_into(item, k.terms[i], true);
      line += item;
    }
    lines.push_back(std::move(line));
  }
  emit_entries(out, lines);

  out << "\nActions:\n";
  for (const auto& a : model.actions) out << "  " << print_action(a) << '\n';

  out << "\nGoals:\n";
  for (const auto& g : model.goals) out << "  " << print_goal(g) << '\n';
  return out.str();
}

}  // namespace anbx::syntax
