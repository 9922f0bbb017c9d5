// STL abstract syntax: atomic predicates, interval-bounded temporal operators,
// Boolean connectives. Nodes are immutable and shared; every node carries a
// stable id used by constraint traceability.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace stlnav::stl {

// Affine predicate g(x) = coeffs.dot(x) + offset; satisfied iff g(x) >= 0.
struct AtomicPredicate {
  Eigen::VectorXd coeffs;
  double offset = 0.0;

  double eval(const Eigen::VectorXd& x) const { return coeffs.dot(x) + offset; }
};

// Discrete-time window [a, b] in steps, 0 <= a <= b.
struct Interval {
  int a = 0;
  int b = 0;
};

enum class NodeKind { True, Atom, Region, Not, And, Or, Always, Eventually, Until };

struct Node;
using Formula = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind = NodeKind::True;
  int id = -1;

  AtomicPredicate pred;         // Atom
  std::string region;           // Region: name resolved against the scenario
  bool complemented = false;    // Region: true means avoidance (negated membership)
  Interval window;              // Always / Eventually / Until
  std::vector<Formula> kids;    // Not: 1, And/Or: >= 2, G/F: 1, Until: 2 (left, right)

  bool is_atom() const { return kind == NodeKind::Atom || kind == NodeKind::Region; }
  bool is_temporal() const {
    return kind == NodeKind::Always || kind == NodeKind::Eventually || kind == NodeKind::Until;
  }
};

// Assigns node ids; one builder per formula keeps ids unique.
class FormulaBuilder {
 public:
  explicit FormulaBuilder(int first_id = 0) : next_(first_id) {}

  Formula truth() { return mk(NodeKind::True); }

  Formula atom(AtomicPredicate p) {
    auto n = mk(NodeKind::Atom);
    n->pred = std::move(p);
    return n;
  }

  Formula region(std::string name, bool complemented = false) {
    auto n = mk(NodeKind::Region);
    n->region = std::move(name);
    n->complemented = complemented;
    return n;
  }

  Formula negate(Formula f) {
    auto n = mk(NodeKind::Not);
    n->kids = {std::move(f)};
    return n;
  }

  // Flattens nested same-connective chains; a single operand is returned as-is.
  Formula conj(std::vector<Formula> kids) { return nary(NodeKind::And, std::move(kids)); }
  Formula disj(std::vector<Formula> kids) { return nary(NodeKind::Or, std::move(kids)); }

  Formula always(Interval w, Formula f) { return temporal(NodeKind::Always, w, {std::move(f)}); }
  Formula eventually(Interval w, Formula f) {
    return temporal(NodeKind::Eventually, w, {std::move(f)});
  }
  Formula until(Interval w, Formula lhs, Formula rhs) {
    return temporal(NodeKind::Until, w, {std::move(lhs), std::move(rhs)});
  }

  // Re-issues an existing node with a fresh child list, keeping its id.
  static Formula with_kids(const Formula& src, std::vector<Formula> kids) {
    auto n = std::make_shared<Node>(*src);
    n->kids = std::move(kids);
    return n;
  }

  int next_id() const { return next_; }

 private:
  std::shared_ptr<Node> mk(NodeKind k) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->id = next_++;
    return n;
  }

  Formula nary(NodeKind k, std::vector<Formula> kids) {
    if (kids.size() == 1) return kids.front();
    std::vector<Formula> flat;
    for (auto& c : kids) {
      if (c->kind == k) {
        flat.insert(flat.end(), c->kids.begin(), c->kids.end());
      } else {
        flat.push_back(std::move(c));
      }
    }
    auto n = mk(k);
    n->kids = std::move(flat);
    return n;
  }

  Formula temporal(NodeKind k, Interval w, std::vector<Formula> kids) {
    auto n = mk(k);
    n->window = w;
    n->kids = std::move(kids);
    return n;
  }

  int next_;
};

// Depth-first walk over all nodes (parents before children).
void walk(const Formula& f, const std::function<void(const Formula&)>& fn);

// Largest node id in the formula (for continuing id sequences).
int max_node_id(const Formula& f);

// Node with the given id, or nullptr.
Formula find_node(const Formula& f, int id);

}  // namespace stlnav::stl
