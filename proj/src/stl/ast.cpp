#include "stlnav/stl/ast.hpp"

#include <algorithm>

namespace stlnav::stl {

void walk(const Formula& f, const std::function<void(const Formula&)>& fn) {
  fn(f);
  for (const auto& k : f->kids) walk(k, fn);
}

int max_node_id(const Formula& f) {
  int m = -1;
  walk(f, [&](const Formula& n) { m = std::max(m, n->id); });
  return m;
}

Formula find_node(const Formula& f, int id) {
  Formula out;
  walk(f, [&](const Formula& n) {
    if (n->id == id) out = n;
  });
  return out;
}

}  // namespace stlnav::stl
