// Negation normal form. Negation is pushed down to atoms; a negated affine
// atom g >= 0 is rewritten as -g - eps >= 0 with a strictness margin so the
// downstream encoding stays sound without open-set semantics. Negation over
// Until is rejected.
#pragma once

#include "stlnav/stl/ast.hpp"

namespace stlnav::stl {

inline constexpr double kStrictEps = 1e-6;

Formula to_nnf(const Formula& f, double strict_eps = kStrictEps);

bool is_nnf(const Formula& f);

}  // namespace stlnav::stl
