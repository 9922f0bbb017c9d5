#include "stlnav/stl/printer.hpp"

#include <algorithm>

#include "stlnav/errors.hpp"
#include "stlnav/numfmt.hpp"

namespace stlnav::stl {

namespace {

std::string var_name(int index, int dims) {
  static const char* pos[3] = {"px", "py", "pz"};
  static const char* vel[3] = {"vx", "vy", "vz"};
  return index < dims ? pos[index] : vel[index - dims];
}

std::string print_affine(const AtomicPredicate& p) {
  const int dims = static_cast<int>(p.coeffs.size()) / 2;
  std::string out = "{";
  bool first = true;
  for (int i = 0; i < p.coeffs.size(); ++i) {
    double c = p.coeffs[i];
    if (c == 0.0) continue;
    if (first) {
      if (c < 0) out += "- ";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    double mag = std::abs(c);
    if (mag != 1.0) out += format_double(mag) + " * ";
    out += var_name(i, dims);
    first = false;
  }
  out += " >= " + format_double(-p.offset) + "}";
  return out;
}

std::string print(const Formula& f);

// Parenthesize compound operands of prefix operators and Until.
std::string print_operand(const Formula& f) {
  switch (f->kind) {
    case NodeKind::And:
    case NodeKind::Or:
    case NodeKind::Until:
      return "(" + print(f) + ")";
    default:
      return print(f);
  }
}

// Until's left side must be a primary in the grammar.
std::string print_until_lhs(const Formula& f) {
  switch (f->kind) {
    case NodeKind::True:
    case NodeKind::Atom:
      return print(f);
    case NodeKind::Region:
      return f->complemented ? "(" + print(f) + ")" : print(f);
    default:
      return "(" + print(f) + ")";
  }
}

std::string window_text(const Interval& w) {
  return "[" + std::to_string(w.a) + "," + std::to_string(w.b) + "]";
}

std::string print(const Formula& f) {
  switch (f->kind) {
    case NodeKind::True:
      return "true";
    case NodeKind::Atom:
      return print_affine(f->pred);
    case NodeKind::Region:
      return (f->complemented ? "!" : "") + f->region;
    case NodeKind::Not:
      return "!" + print_operand(f->kids[0]);
    case NodeKind::And:
    case NodeKind::Or: {
      std::vector<std::string> parts;
      parts.reserve(f->kids.size());
      for (const auto& k : f->kids) {
        parts.push_back(f->kind == NodeKind::And && k->kind == NodeKind::Or
                            ? "(" + print(k) + ")"
                            : print(k));
      }
      std::sort(parts.begin(), parts.end());
      std::string sep = f->kind == NodeKind::And ? " & " : " | ";
      std::string out = parts[0];
      for (size_t i = 1; i < parts.size(); ++i) out += sep + parts[i];
      return out;
    }
    case NodeKind::Always:
      return "G" + window_text(f->window) + " " + print_operand(f->kids[0]);
    case NodeKind::Eventually:
      return "F" + window_text(f->window) + " " + print_operand(f->kids[0]);
    case NodeKind::Until:
      return print_until_lhs(f->kids[0]) + " U" + window_text(f->window) + " " +
             print_operand(f->kids[1]);
  }
  return "";
}

}  // namespace

std::string print_canonical(const Formula& f) { return print(f); }

bool exact_match(const std::string& hypothesis, const std::string& reference,
                 const RegionTable& table) {
  std::string ref_text;
  try {
    ref_text = print_canonical(parse_stl(reference, table));
  } catch (const Error& e) {
    throw InvalidReference(e.what());
  }
  try {
    return print_canonical(parse_stl(hypothesis, table)) == ref_text;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace stlnav::stl
