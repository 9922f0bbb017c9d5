// Canonical textual form: deterministic spelling, flattened connectives,
// commutative operands sorted lexicographically. Exact-match comparison of
// two formulas is equality of their canonical texts.
#pragma once

#include <string>

#include "stlnav/stl/ast.hpp"
#include "stlnav/stl/parser.hpp"

namespace stlnav::stl {

std::string print_canonical(const Formula& f);

// True iff both strings canonicalize to the same text. An unparseable
// hypothesis yields false; an unparseable reference throws InvalidReference.
bool exact_match(const std::string& hypothesis, const std::string& reference,
                 const RegionTable& table);

}  // namespace stlnav::stl
