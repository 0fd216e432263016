#include "anbx/syntax/lexer.hpp"

#include <cctype>

namespace anbx::syntax {

std::string_view to_string(TokenKind k) {
  switch (k) {
    case TokenKind::Ident: return "identifier";
    case TokenKind::Colon: return "':'";
    case TokenKind::Semicolon: return "';'";
    case TokenKind::Comma: return "','";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::LBrace: return "'{'";
    case TokenKind::RBrace: return "'}'";
    case TokenKind::LSymBrace: return "'{|'";
    case TokenKind::RSymBrace: return "'|}'";
    case TokenKind::Bar: return "'|'";
    case TokenKind::At: return "'@'";
    case TokenKind::Dash: return "'-'";
    case TokenKind::Arrow: return "'->'";
    case TokenKind::Equals: return "'='";
    case TokenKind::Invalid: return "invalid character";
    case TokenKind::End: return "end of input";
  }
  return "token";
}

namespace {

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_'; }
bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_'; }

class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      if (pos_ >= text_.size()) {
        out.push_back(make(TokenKind::End, pos_, here()));
        return out;
      }
      out.push_back(next());
    }
  }

 private:
  Position here() const { return {line_, col_}; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_trivia() {
    while (pos_ < text_.size()) {
      unsigned char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v') {
        advance();
      } else {
        return;
      }
    }
  }

  Token make(TokenKind kind, std::size_t begin, Position start) const {
    Token t;
    t.kind = kind;
    t.text = text_.substr(begin, pos_ - begin);
    t.range = SourceRange{begin, pos_, start, here()};
    return t;
  }

  bool peek_is(std::size_t offset, char c) const {
    return pos_ + offset < text_.size() && text_[pos_ + offset] == c;
  }

  Token single(TokenKind kind, std::size_t width = 1) {
    std::size_t begin = pos_;
    Position start = here();
    for (std::size_t i = 0; i < width; ++i) advance();
    return make(kind, begin, start);
  }

  Token next() {
    unsigned char c = text_[pos_];
    if (ident_start(c)) {
      std::size_t begin = pos_;
      Position start = here();
      while (pos_ < text_.size() && ident_char(text_[pos_])) advance();
      return make(TokenKind::Ident, begin, start);
    }
    switch (c) {
      case ':': return single(TokenKind::Colon);
      case ';': return single(TokenKind::Semicolon);
      case ',': return single(TokenKind::Comma);
      case '(': return single(TokenKind::LParen);
      case ')': return single(TokenKind::RParen);
      case '@': return single(TokenKind::At);
      case '=': return single(TokenKind::Equals);
      case '}': return single(TokenKind::RBrace);
      case '{': return peek_is(1, '|') ? single(TokenKind::LSymBrace, 2) : single(TokenKind::LBrace);
      case '|': return peek_is(1, '}') ? single(TokenKind::RSymBrace, 2) : single(TokenKind::Bar);
      case '-': return peek_is(1, '>') ? single(TokenKind::Arrow, 2) : single(TokenKind::Dash);
      default: return single(TokenKind::Invalid);
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view text) { return Scanner(text).run(); }

}  // namespace anbx::syntax
