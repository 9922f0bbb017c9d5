// Recursive-descent parser for the STL text grammar:
//
//   formula := or ;  or := and ("|" and)* ;  and := unary ("&" unary)* ;
//   unary   := "!" unary | "G[" int "," int "]" unary | "F[" int "," int "]" unary
//            | atom ("U[" int "," int "]" unary)? | "(" formula ")" ;
//   atom    := IDENT | "{" affine "}" ;
//   affine  := term (("+"|"-") term)* (">="|"<=") number ;
//   term    := number "*" VAR | VAR ;   VAR in {px, py, pz, vx, vy, vz}
//
// Precedence: ! > U > & > |. IDENT resolves through the region table; the
// literal "true" is reserved.
#pragma once

#include <set>
#include <string>

#include "stlnav/stl/ast.hpp"

namespace stlnav::stl {

// Names visible to the parser plus the spatial dimension that decides which
// state variables (pz/vz) are admissible.
struct RegionTable {
  int dims = 2;
  std::set<std::string> names;

  bool has(const std::string& n) const { return names.count(n) > 0; }
};

Formula parse_stl(const std::string& text, const RegionTable& table);

}  // namespace stlnav::stl
