#include "anbx/syntax/parser.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <string>

#include "anbx/syntax/lexer.hpp"

namespace anbx::syntax {
namespace {

constexpr std::array<std::string_view, 7> kSectionNames = {
    "Protocol", "Types", "Definitions", "Equations", "Knowledge", "Actions", "Goals"};

constexpr std::array<bool, 7> kMandatory = {true, true, false, false, true, true, false};

const std::set<std::string_view>& reserved_words() {
  static const std::set<std::string_view> words = {
      "Protocol",  "Types",     "Definitions",   "Equations",     "Knowledge", "Actions",
      "Goals",     "Agent",     "Number",        "SymmetricKey",  "Symmetric_key",
      "PublicKey", "PrivateKey", "Payload",      "Function",      "Certified", "weakly",
      "authenticates", "on",    "secret",        "between"};
  return words;
}

struct ParseFailure {
  Diagnostic diagnostic;
};

class Parser {
 public:
  explicit Parser(const SourceFile& src) : src_(src), toks_(tokenize(src.text)) {}

  ParseResult run() {
    ParseResult result;
    try {
      ProtocolModel model = parse_model();
      if (model.goals.empty()) {
        Diagnostic w;
        w.severity = Severity::Warning;
        w.code = "W-NO-GOALS";
        w.range = model.section_range(Section::Goals).value_or(model.name.range);
        w.message = "protocol declares no security goals";
        result.diagnostics.push_back(std::move(w));
      }
      result.model = std::move(model);
    } catch (const ParseFailure& f) {
      result.diagnostics.push_back(f.diagnostic);
    }
    return result;
  }

  std::optional<Term> run_term(std::vector<Diagnostic>* diags) {
    try {
      Term t = parse_cat(0);
      if (!at(TokenKind::End)) fail("E-PARSE", "unexpected " + describe(peek()), peek().range);
      return t;
    } catch (const ParseFailure& f) {
      if (diags) diags->push_back(f.diagnostic);
      return std::nullopt;
    }
  }

 private:
  // ---- token helpers ------------------------------------------------------

  const Token& peek(std::size_t k = 0) const {
    std::size_t i = std::min(pos_ + k, toks_.size() - 1);
    return toks_[i];
  }
  bool at(TokenKind k) const { return peek().kind == k; }
  bool at_word(std::string_view w) const { return at(TokenKind::Ident) && peek().text == w; }

  Token take() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    last_ = t.range;
    return t;
  }

  bool accept(TokenKind k) {
    if (!at(k)) return false;
    take();
    return true;
  }

  static std::string describe(const Token& t) {
    if (t.kind == TokenKind::Ident) return "'" + std::string(t.text) + "'";
    if (t.kind == TokenKind::Invalid) {
      unsigned char c = t.text.empty() ? 0 : static_cast<unsigned char>(t.text[0]);
      static const char* hex = "0123456789abcdef";
      std::string s = "character 0x";
      s += hex[c >> 4];
      s += hex[c & 15];
      return s;
    }
    return std::string(to_string(t.kind));
  }

  [[noreturn]] void fail(std::string code, std::string message, SourceRange range) const {
    Diagnostic d;
    d.severity = Severity::Error;
    d.code = std::move(code);
    d.range = range;
    d.message = std::move(message);
    throw ParseFailure{std::move(d)};
  }

  Token expect(TokenKind k, std::string_view context) {
    if (!at(k))
      fail("E-PARSE",
           "expected " + std::string(to_string(k)) + " " + std::string(context) + ", found " +
               describe(peek()),
           peek().range);
    return take();
  }

  void expect_word(std::string_view w) {
    if (!at_word(w))
      fail("E-PARSE", "expected '" + std::string(w) + "', found " + describe(peek()),
           peek().range);
    take();
  }

  Ident expect_name(std::string_view what) {
    if (!at(TokenKind::Ident))
      fail("E-PARSE", "expected " + std::string(what) + ", found " + describe(peek()),
           peek().range);
    if (reserved_words().count(peek().text))
      fail("E-PARSE", "keyword " + describe(peek()) + " cannot be used as " + std::string(what),
           peek().range);
    Token t = take();
    return Ident{std::string(t.text), t.range};
  }

  SourceRange from(const SourceRange& start) const { return join(start, last_); }

  int section_at_header() const {
    if (!at(TokenKind::Ident) || peek(1).kind != TokenKind::Colon) return -1;
    for (std::size_t i = 0; i < kSectionNames.size(); ++i)
      if (peek().text == kSectionNames[i]) return static_cast<int>(i);
    return -1;
  }

  bool at_section_end() const { return at(TokenKind::End) || section_at_header() >= 0; }

  SourceRange zero_width_here() const {
    SourceRange r = peek().range;
    r.end = r.begin;
    r.stop = r.start;
    return r;
  }

  // ---- model --------------------------------------------------------------

  ProtocolModel parse_model() {
    ProtocolModel m;
    m.dialect = src_.dialect;

    int first = section_at_header();
    if (first != 0) {
      if (first > 0) fail("E-SECTION-MISSING", "missing 'Protocol:' header", peek().range);
      fail("E-PARSE", "expected 'Protocol:' header, found " + describe(peek()), peek().range);
    }
    SourceRange header = take().range;
    take();  // ':'
    m.name = expect_name("protocol name");
    m.section_ranges.emplace_back(Section::Protocol, from(header));

    std::array<bool, 7> seen{};
    seen[0] = true;
    int last = 0;
    while (!at(TokenKind::End)) {
      int idx = section_at_header();
      if (idx < 0) fail("E-PARSE", "expected a section header, found " + describe(peek()), peek().range);
      if (idx <= last) {
        fail("E-SECTION-ORDER",
             "section '" + std::string(kSectionNames[idx]) + "' is out of order or repeated",
             peek().range);
      }
      for (int i = 1; i < idx; ++i) {
        if (kMandatory[i] && !seen[i])
          fail("E-SECTION-MISSING",
               "missing mandatory section '" + std::string(kSectionNames[i]) + "'", peek().range);
      }
      SourceRange start = take().range;
      take();  // ':'
      switch (static_cast<Section>(idx)) {
        case Section::Types: parse_types(m); break;
        case Section::Definitions: parse_definitions(m); break;
        case Section::Equations: parse_equations(m); break;
        case Section::Knowledge: parse_knowledge(m); break;
        case Section::Actions: parse_actions(m); break;
        case Section::Goals: parse_goals(m); break;
        case Section::Protocol: break;
      }
      m.section_ranges.emplace_back(static_cast<Section>(idx), from(start));
      seen[idx] = true;
      last = idx;
    }
    for (std::size_t i = 1; i < kSectionNames.size(); ++i) {
      if (kMandatory[i] && !seen[i])
        fail("E-SECTION-MISSING",
             "missing mandatory section '" + std::string(kSectionNames[i]) + "'", peek().range);
    }
    return m;
  }

  void parse_types(ProtocolModel& m) {
    while (!at_section_end()) {
      if (!at(TokenKind::Ident))
        fail("E-PARSE", "expected a type keyword, found " + describe(peek()), peek().range);
      std::string_view kw = peek().text;
      Token kwtok = take();
      if (kw == "Certified") {
        if (src_.dialect == Dialect::AnB)
          fail("E-DIALECT", "'Certified' is only available in AnBx", kwtok.range);
        do {
          m.certified.push_back(expect_name("agent name"));
        } while (accept(TokenKind::Comma));
        m.certified_range = from(kwtok.range);
        m.types_end = m.certified_range;
        accept(TokenKind::Semicolon);
        continue;
      }
      TypeDecl decl;
      decl.keyword_range = kwtok.range;
      if (kw == "Agent") decl.kind = DeclKind::Agent;
      else if (kw == "Number") decl.kind = DeclKind::Number;
      else if (kw == "SymmetricKey" || kw == "Symmetric_key") decl.kind = DeclKind::SymmetricKey;
      else if (kw == "PublicKey") decl.kind = DeclKind::PublicKey;
      else if (kw == "Function") decl.kind = DeclKind::Function;
      else fail("E-PARSE", "expected a type keyword, found " + describe(kwtok), kwtok.range);

      do {
        DeclEntry e;
        e.name = expect_name("identifier");
        if (decl.kind == DeclKind::Function && accept(TokenKind::Colon)) e.signature = parse_signature();
        e.range = from(e.name.range);
        decl.entries.push_back(std::move(e));
      } while (accept(TokenKind::Comma));
      decl.range = from(kwtok.range);
      m.types_end = decl.range;
      m.types.push_back(std::move(decl));
      accept(TokenKind::Semicolon);
    }
  }

  SigType parse_sig_type() {
    if (!at(TokenKind::Ident))
      fail("E-PARSE", "expected a type name, found " + describe(peek()), peek().range);
    Token t = take();
    if (t.text == "Agent") return SigType::Agent;
    if (t.text == "Number") return SigType::Number;
    if (t.text == "SymmetricKey" || t.text == "Symmetric_key") return SigType::SymmetricKey;
    if (t.text == "PublicKey") return SigType::PublicKey;
    if (t.text == "PrivateKey") return SigType::PrivateKey;
    if (t.text == "Payload") return SigType::Payload;
    fail("E-PARSE", "unknown type name " + describe(t), t.range);
  }

  Signature parse_signature() {
    Signature sig;
    if (!at(TokenKind::Arrow)) {
      do {
        sig.params.push_back(parse_sig_type());
      } while (accept(TokenKind::Comma));
    }
    expect(TokenKind::Arrow, "in function signature");
    sig.result = parse_sig_type();
    return sig;
  }

  void parse_definitions(ProtocolModel& m) {
    while (!at_section_end()) {
      Macro mac;
      mac.name = expect_name("macro name");
      if (accept(TokenKind::LParen)) {
        if (!at(TokenKind::RParen)) {
          do {
            mac.params.push_back(expect_name("macro parameter"));
          } while (accept(TokenKind::Comma));
        }
        expect(TokenKind::RParen, "after macro parameters");
      }
      if (!accept(TokenKind::Equals) && !accept(TokenKind::Colon))
        fail("E-PARSE", "expected '=' after macro head, found " + describe(peek()), peek().range);
      mac.body = parse_cat(0);
      mac.range = from(mac.name.range);
      m.definitions.push_back(std::move(mac));
      accept(TokenKind::Semicolon);
    }
  }

  void parse_equations(ProtocolModel& m) {
    while (!at_section_end()) {
      Equation eq;
      SourceRange start = peek().range;
      eq.lhs = parse_cat(0);
      expect(TokenKind::Equals, "in equation");
      eq.rhs = parse_cat(0);
      eq.range = from(start);
      m.equations.push_back(std::move(eq));
      accept(TokenKind::Semicolon);
    }
  }

  void parse_knowledge(ProtocolModel& m) {
    while (!at_section_end()) {
      KnowledgeEntry k;
      k.agent = expect_name("agent name");
      expect(TokenKind::Colon, "after agent name");
      do {
        k.terms.push_back(parse_single(0));
      } while (accept(TokenKind::Comma));
      k.range = from(k.agent.range);
      m.knowledge.push_back(std::move(k));
      accept(TokenKind::Semicolon);
    }
  }

  void parse_actions(ProtocolModel& m) {
    while (!at_section_end()) {
      Action a;
      a.sender = expect_name("sender");
      expect(TokenKind::Arrow, "after sender");
      a.receiver = expect_name("receiver");
      if (accept(TokenKind::Comma)) a.mode = parse_mode();
      expect(TokenKind::Colon, "before message");
      a.payload = parse_cat(0);
      a.range = from(a.sender.range);
      m.actions.push_back(std::move(a));
      accept(TokenKind::Semicolon);
    }
    if (m.actions.empty())
      fail("E-PARSE", "the Actions section must contain at least one action", zero_width_here());
  }

  void parse_slot(std::optional<Ident>& slot, SourceRange& range) {
    if (at(TokenKind::Ident)) {
      slot = expect_name("agent name");
      range = slot->range;
    } else if (at(TokenKind::Dash)) {
      range = take().range;
    } else {
      range = zero_width_here();
    }
  }

  ChannelMode parse_mode() {
    ChannelMode mode;
    mode.triple = true;
    SourceRange start = peek().range;
    if (at(TokenKind::At)) {
      take();
      mode.fresh = true;
    }
    expect(TokenKind::LParen, "to open channel mode");
    parse_slot(mode.auth, mode.auth_range);
    expect(TokenKind::Bar, "after authenticating agent");
    if (at(TokenKind::Dash)) {
      mode.verifiers_range = take().range;
    } else if (at(TokenKind::Ident)) {
      SourceRange vs = peek().range;
      do {
        mode.verifiers.push_back(expect_name("verifier"));
      } while (accept(TokenKind::Comma));
      mode.verifiers_range = from(vs);
    } else {
      mode.verifiers_range = zero_width_here();
    }
    expect(TokenKind::Bar, "after verifiers");
    parse_slot(mode.dest, mode.dest_range);
    expect(TokenKind::RParen, "to close channel mode");
    mode.range = from(start);
    if (mode.fresh && !mode.auth)
      fail("E-PARSE", "'@' freshness requires an authenticating agent", mode.range);
    if (src_.dialect == Dialect::AnB)
      fail("E-DIALECT", "channel modes are only available in AnBx", mode.range);
    return mode;
  }

  void parse_goals(ProtocolModel& m) {
    while (!at_section_end()) {
      Goal g;
      SourceRange start = peek().range;
      Term head = parse_cat(0);
      if (at_word("weakly") || at_word("authenticates")) {
        g.kind = at_word("weakly") ? Goal::Kind::WeakAuth : Goal::Kind::Auth;
        if (g.kind == Goal::Kind::WeakAuth) take();
        if (!head.is(Term::Kind::Atom))
          fail("E-PARSE", "authentication goals start with an agent name", head.range());
        g.verifier = Ident{head.name(), head.range()};
        expect_word("authenticates");
        g.peer = expect_name("agent name");
        expect_word("on");
        g.term = parse_cat(0);
      } else if (at_word("secret")) {
        take();
        expect_word("between");
        g.kind = Goal::Kind::Secrecy;
        g.term = std::move(head);
        std::set<std::string> seen;
        do {
          Ident p = expect_name("agent name");
          if (!seen.insert(p.name).second)
            fail("E-PARSE", "agent '" + p.name + "' listed twice in secrecy goal", p.range);
          g.parties.push_back(std::move(p));
        } while (accept(TokenKind::Comma));
      } else {
        fail("E-PARSE", "expected 'authenticates', 'weakly authenticates' or 'secret', found " + describe(peek()),
             peek().range);
      }
      g.range = from(start);
      m.goals.push_back(std::move(g));
      accept(TokenKind::Semicolon);
    }
  }

  // ---- terms --------------------------------------------------------------

  Term parse_cat(int depth) {
    SourceRange start = peek().range;
    std::vector<Term> items;
    items.push_back(parse_single(depth));
    while (accept(TokenKind::Comma)) items.push_back(parse_single(depth));
    if (items.size() == 1) return std::move(items.front());
    return Term::cat(std::move(items), from(start));
  }

  Term parse_single(int depth) {
    if (depth > kMaxNesting) fail("E-PARSE", "term nesting is too deep", peek().range);
    SourceRange start = peek().range;
    if (at(TokenKind::Ident)) {
      Ident name = expect_name("term");
      if (!accept(TokenKind::LParen)) return Term::atom(name.name, name.range);
      std::vector<Term> args;
      if (!at(TokenKind::RParen)) {
        do {
          args.push_back(parse_single(depth + 1));
        } while (accept(TokenKind::Comma));
      }
      expect(TokenKind::RParen, "to close argument list");
      return Term::apply(name.name, std::move(args), from(start));
    }
    if (accept(TokenKind::LBrace)) {
      Term payload = parse_cat(depth + 1);
      expect(TokenKind::RBrace, "to close asymmetric encryption");
      Term key = parse_single(depth + 1);
      return Term::asym(std::move(payload), std::move(key), from(start));
    }
    if (accept(TokenKind::LSymBrace)) {
      Term payload = parse_cat(depth + 1);
      expect(TokenKind::RSymBrace, "to close symmetric encryption");
      Term key = parse_single(depth + 1);
      return Term::sym(std::move(payload), std::move(key), from(start));
    }
    if (accept(TokenKind::LParen)) {
      Term inner = parse_cat(depth + 1);
      expect(TokenKind::RParen, "to close parenthesised term");
      if (inner.is(Term::Kind::Cat)) inner.set_range(from(start));
      return inner;
    }
    fail("E-PARSE", "expected a term, found " + describe(peek()), peek().range);
  }

  const SourceFile& src_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  SourceRange last_;
};

}  // namespace

ParseResult parse(const SourceFile& source) { return Parser(source).run(); }

std::optional<Term> parse_term(std::string_view text, std::vector<Diagnostic>* diags) {
  SourceFile src = SourceFile::from_text(std::string(text), Dialect::AnBx);
  return Parser(src).run_term(diags);
}

}  // namespace anbx::syntax
