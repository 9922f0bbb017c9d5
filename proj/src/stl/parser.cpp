#include "stlnav/stl/parser.hpp"

#include <cstdlib>

#include "stlnav/errors.hpp"
#include "stlnav/stl/lexer.hpp"

namespace stlnav::stl {

namespace {

class Parser {
 public:
  Parser(const std::string& text, const RegionTable& table)
      : toks_(lex(text)), table_(table) {}

  Formula run() {
    Formula f = parse_or();
    expect(TokType::End, "end of input");
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  bool accept(TokType t) {
    if (peek().type != t) return false;
    ++pos_;
    return true;
  }

  const Token& expect(TokType t, const std::string& what) {
    if (peek().type != t) throw SyntaxError(peek().pos, what, peek().text);
    return toks_[pos_++];
  }

  Formula parse_or() {
    std::vector<Formula> kids{parse_and()};
    while (accept(TokType::Pipe)) kids.push_back(parse_and());
    return kids.size() == 1 ? kids.front() : b_.disj(std::move(kids));
  }

  Formula parse_and() {
    std::vector<Formula> kids{parse_unary()};
    while (accept(TokType::Amp)) kids.push_back(parse_unary());
    return kids.size() == 1 ? kids.front() : b_.conj(std::move(kids));
  }

  Interval parse_window() {
    expect(TokType::LBracket, "'['");
    long a = parse_int();
    expect(TokType::Comma, "','");
    long b = parse_int();
    expect(TokType::RBracket, "']'");
    if (a < 0 || b < 0 || a > b) throw BadInterval(a, b);
    return Interval{static_cast<int>(a), static_cast<int>(b)};
  }

  long parse_int() {
    bool neg = accept(TokType::Minus);
    const Token& t = expect(TokType::Number, "an integer");
    if (t.text.find_first_of(".eE") != std::string::npos)
      throw SyntaxError(t.pos, "an integer", t.text);
    long v = std::strtol(t.text.c_str(), nullptr, 10);
    return neg ? -v : v;
  }

  Formula parse_unary() {
    const Token& t = peek();
    switch (t.type) {
      case TokType::Bang:
        next();
        return b_.negate(parse_unary());
      case TokType::OpG: {
        next();
        Interval w = parse_window();
        return b_.always(w, parse_unary());
      }
      case TokType::OpF: {
        next();
        Interval w = parse_window();
        return b_.eventually(w, parse_unary());
      }
      default:
        break;
    }
    Formula lhs = parse_primary();
    if (peek().type == TokType::OpU) {
      next();
      Interval w = parse_window();
      Formula rhs = parse_unary();
      return b_.until(w, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Formula parse_primary() {
    const Token& t = peek();
    if (accept(TokType::LParen)) {
      Formula f = parse_or();
      expect(TokType::RParen, "')'");
      return f;
    }
    if (t.type == TokType::Ident) {
      next();
      if (t.text == "true") return b_.truth();
      if (!table_.has(t.text)) throw UnknownRegion(t.text);
      return b_.region(t.text);
    }
    if (accept(TokType::LBrace)) {
      Formula f = parse_affine();
      expect(TokType::RBrace, "'}'");
      return f;
    }
    throw SyntaxError(t.pos, "an atom, '!', 'G', 'F' or '('", t.text);
  }

  int var_index(const Token& t) const {
    static const char* names[6] = {"px", "py", "pz", "vx", "vy", "vz"};
    int slot = -1;
    for (int i = 0; i < 6; ++i) {
      if (t.text == names[i]) slot = i;
    }
    if (slot < 0) throw SyntaxError(t.pos, "a state variable (px..vz)", t.text);
    int axis = slot % 3;
    bool vel = slot >= 3;
    if (axis >= table_.dims)
      throw SyntaxError(t.pos, "a variable within " + std::to_string(table_.dims) + " dimensions",
                        t.text);
    return vel ? table_.dims + axis : axis;
  }

  double parse_number() {
    bool neg = accept(TokType::Minus);
    const Token& t = expect(TokType::Number, "a number");
    double v = std::strtod(t.text.c_str(), nullptr);
    return neg ? -v : v;
  }

  // term := number "*" VAR | VAR, accumulated with +/- separators.
  Formula parse_affine() {
    Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(2 * table_.dims);
    double sign = 1.0;
    if (accept(TokType::Minus)) sign = -1.0;
    for (;;) {
      double c = sign;
      if (peek().type == TokType::Number) {
        c = sign * parse_number();
        expect(TokType::Star, "'*'");
      }
      const Token& v = expect(TokType::Ident, "a state variable");
      coeffs[var_index(v)] += c;
      if (accept(TokType::Plus)) {
        sign = 1.0;
      } else if (accept(TokType::Minus)) {
        sign = -1.0;
      } else {
        break;
      }
    }
    bool ge;
    if (accept(TokType::Ge)) {
      ge = true;
    } else if (accept(TokType::Le)) {
      ge = false;
    } else {
      throw SyntaxError(peek().pos, "'>=' or '<='", peek().text);
    }
    double rhs = parse_number();
    AtomicPredicate p;
    if (ge) {
      p.coeffs = coeffs;
      p.offset = -rhs;
    } else {
      p.coeffs = -coeffs;
      p.offset = rhs;
    }
    if (p.coeffs.cwiseAbs().maxCoeff() == 0.0)
      throw SyntaxError(peek().pos, "a predicate with at least one nonzero coefficient", "{...}");
    return b_.atom(std::move(p));
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  const RegionTable& table_;
  FormulaBuilder b_;
};

}  // namespace

Formula parse_stl(const std::string& text, const RegionTable& table) {
  return Parser(text, table).run();
}

}  // namespace stlnav::stl
