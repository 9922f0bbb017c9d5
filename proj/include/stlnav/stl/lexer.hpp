// Tokenizer for the STL text grammar. Also the token basis for BLEU scoring,
// so rewards and parsing agree on token boundaries.
#pragma once

#include <string>
#include <vector>

namespace stlnav::stl {

enum class TokType {
  Ident,     // region names, variable names
  Number,    // integer or real literal, optional leading '-'
  LParen, RParen, LBrace, RBrace, LBracket, RBracket,
  Amp, Pipe, Bang, Comma, Plus, Minus, Star, Ge, Le,
  OpG, OpF, OpU,   // temporal operator heads (single letters G/F/U)
  End,
  Junk,      // anything unrecognized (loose mode only)
};

struct Token {
  TokType type;
  std::string text;
  size_t pos = 0;
};

// Strict tokenization; throws SyntaxError on unrecognized input.
std::vector<Token> lex(const std::string& text);

// Loose tokenization for scoring: never throws, unknown bytes become Junk tokens.
std::vector<Token> lex_loose(const std::string& text);

// Token texts only (loose mode), as used by the BLEU reward.
std::vector<std::string> lex_tokens(const std::string& text);

}  // namespace stlnav::stl
