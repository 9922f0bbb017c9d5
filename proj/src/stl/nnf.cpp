#include "stlnav/stl/nnf.hpp"

#include "stlnav/errors.hpp"

namespace stlnav::stl {

namespace {

std::shared_ptr<Node> clone(const Formula& f) { return std::make_shared<Node>(*f); }

// Flatten same-connective children in place (NNF on a negated child can
// surface a nested chain of the parent's own connective).
void flatten(Node& n) {
  std::vector<Formula> flat;
  for (auto& k : n.kids) {
    if (k->kind == n.kind) {
      flat.insert(flat.end(), k->kids.begin(), k->kids.end());
    } else {
      flat.push_back(k);
    }
  }
  n.kids = std::move(flat);
}

Formula nnf(const Formula& f, bool negated, double eps) {
  switch (f->kind) {
    case NodeKind::True:
      if (negated) throw Error("negation of 'true' has no representation in this grammar");
      return f;
    case NodeKind::Atom: {
      if (!negated) return f;
      auto n = clone(f);
      n->pred.coeffs = -f->pred.coeffs;
      n->pred.offset = -f->pred.offset - eps;
      return n;
    }
    case NodeKind::Region: {
      if (!negated) return f;
      auto n = clone(f);
      n->complemented = !f->complemented;
      return n;
    }
    case NodeKind::Not:
      return nnf(f->kids[0], !negated, eps);
    case NodeKind::And:
    case NodeKind::Or: {
      auto n = clone(f);
      if (negated)
        n->kind = f->kind == NodeKind::And ? NodeKind::Or : NodeKind::And;
      for (auto& k : n->kids) k = nnf(k, negated, eps);
      flatten(*n);
      return n;
    }
    case NodeKind::Always:
    case NodeKind::Eventually: {
      auto n = clone(f);
      if (negated)
        n->kind = f->kind == NodeKind::Always ? NodeKind::Eventually : NodeKind::Always;
      n->kids[0] = nnf(f->kids[0], negated, eps);
      return n;
    }
    case NodeKind::Until: {
      if (negated) throw UnsupportedNegation(f->id);
      auto n = clone(f);
      n->kids[0] = nnf(f->kids[0], false, eps);
      n->kids[1] = nnf(f->kids[1], false, eps);
      return n;
    }
  }
  return f;
}

}  // namespace

Formula to_nnf(const Formula& f, double strict_eps) { return nnf(f, false, strict_eps); }

bool is_nnf(const Formula& f) {
  bool ok = true;
  walk(f, [&](const Formula& n) {
    if (n->kind == NodeKind::Not) ok = false;
  });
  return ok;
}

}  // namespace stlnav::stl
