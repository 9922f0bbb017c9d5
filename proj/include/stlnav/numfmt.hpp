// Deterministic shortest round-trip formatting for doubles.
#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace stlnav {

// Shortest decimal string that parses back to exactly the same double.
inline std::string format_double(double v) {
  if (v == 0.0) return "0";  // normalizes -0 as well
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace stlnav
