#include "stlnav/stl/lexer.hpp"

#include <cctype>

#include "stlnav/errors.hpp"

namespace stlnav::stl {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex_impl(const std::string& text, bool strict) {
  std::vector<Token> out;
  size_t i = 0;
  const size_t n = text.size();
  while (i < n) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    size_t start = i;
    switch (c) {
      case '(': out.push_back({TokType::LParen, "(", start}); ++i; continue;
      case ')': out.push_back({TokType::RParen, ")", start}); ++i; continue;
      case '{': out.push_back({TokType::LBrace, "{", start}); ++i; continue;
      case '}': out.push_back({TokType::RBrace, "}", start}); ++i; continue;
      case '[': out.push_back({TokType::LBracket, "[", start}); ++i; continue;
      case ']': out.push_back({TokType::RBracket, "]", start}); ++i; continue;
      case '&': out.push_back({TokType::Amp, "&", start}); ++i; continue;
      case '|': out.push_back({TokType::Pipe, "|", start}); ++i; continue;
      case '!': out.push_back({TokType::Bang, "!", start}); ++i; continue;
      case ',': out.push_back({TokType::Comma, ",", start}); ++i; continue;
      case '+': out.push_back({TokType::Plus, "+", start}); ++i; continue;
      case '*': out.push_back({TokType::Star, "*", start}); ++i; continue;
      case '-': out.push_back({TokType::Minus, "-", start}); ++i; continue;
      default: break;
    }
    if (c == '>' || c == '<') {
      if (i + 1 < n && text[i + 1] == '=') {
        out.push_back({c == '>' ? TokType::Ge : TokType::Le, text.substr(i, 2), start});
        i += 2;
        continue;
      }
      if (strict) throw SyntaxError(start, "'>=' or '<='", text.substr(i, 1));
      out.push_back({TokType::Junk, text.substr(i, 1), start});
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      size_t j = i;
      while (j < n && (std::isdigit(static_cast<unsigned char>(text[j])) || text[j] == '.')) ++j;
      if (j < n && (text[j] == 'e' || text[j] == 'E')) {
        size_t e = j + 1;
        if (e < n && (text[e] == '+' || text[e] == '-')) ++e;
        if (e < n && std::isdigit(static_cast<unsigned char>(text[e]))) {
          ++e;
          while (e < n && std::isdigit(static_cast<unsigned char>(text[e]))) ++e;
          j = e;
        }
      }
      out.push_back({TokType::Number, text.substr(i, j - i), start});
      i = j;
      continue;
    }
    if (ident_start(c)) {
      size_t j = i;
      while (j < n && ident_char(text[j])) ++j;
      std::string word = text.substr(i, j - i);
      // Single letters G/F/U are operator heads only when a window follows.
      if (word.size() == 1 && (word == "G" || word == "F" || word == "U") && j < n &&
          text[j] == '[') {
        TokType t = word == "G" ? TokType::OpG : word == "F" ? TokType::OpF : TokType::OpU;
        out.push_back({t, word, start});
      } else {
        out.push_back({TokType::Ident, word, start});
      }
      i = j;
      continue;
    }
    if (strict) throw SyntaxError(start, "a token", text.substr(i, 1));
    out.push_back({TokType::Junk, text.substr(i, 1), start});
    ++i;
  }
  out.push_back({TokType::End, "", n});
  return out;
}

}  // namespace

std::vector<Token> lex(const std::string& text) { return lex_impl(text, true); }

std::vector<Token> lex_loose(const std::string& text) { return lex_impl(text, false); }

std::vector<std::string> lex_tokens(const std::string& text) {
  std::vector<std::string> out;
  for (const auto& t : lex_loose(text)) {
    if (t.type != TokType::End) out.push_back(t.text);
  }
  return out;
}

}  // namespace stlnav::stl
