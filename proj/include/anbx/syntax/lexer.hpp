#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "anbx/syntax/source.hpp"

namespace anbx::syntax {

enum class TokenKind {
  Ident,
  Colon,
  Semicolon,
  Comma,
  LParen,
  RParen,
  LBrace,      // {
  RBrace,      // }
  LSymBrace,   // {|
  RSymBrace,   // |}
  Bar,
  At,
  Dash,
  Arrow,       // ->
  Equals,
  Invalid,
  End,
};

std::string_view to_string(TokenKind k);

struct Token {
  TokenKind kind = TokenKind::End;
  std::string_view text;
  SourceRange range;
};

/// Splits protocol text into tokens. Comments run from '#' to end of line.
/// Unrecognised bytes become Invalid tokens; the stream always ends with End.
std::vector<Token> tokenize(std::string_view text);

}  // namespace anbx::syntax
