#include "stlnav/stl/semantics.hpp"

#include <algorithm>
#include <limits>

#include "stlnav/errors.hpp"

namespace stlnav::stl {

namespace {

const BoxRegion& lookup(const RegionMap& regions, const std::string& name) {
  auto it = regions.find(name);
  if (it == regions.end()) throw UnknownRegion(name);
  return it->second;
}

void check_step(const Formula& f, const Trajectory& tr, int k) {
  if (k < 0 || k > tr.horizon()) throw HorizonExceeded(f->id, k);
}

bool evalb(const Formula& f, const Trajectory& tr, int k, const RegionMap& regions) {
  switch (f->kind) {
    case NodeKind::True:
      return true;
    case NodeKind::Atom:
      check_step(f, tr, k);
      return f->pred.eval(tr.states[k]) >= 0.0;
    case NodeKind::Region: {
      check_step(f, tr, k);
      const auto& box = lookup(regions, f->region);
      const int dims = static_cast<int>(box.lo.size());
      bool inside = box_margin(box, tr.states[k].head(dims)) >= 0.0;
      return f->complemented ? !inside : inside;
    }
    case NodeKind::Not:
      return !evalb(f->kids[0], tr, k, regions);
    case NodeKind::And:
      for (const auto& c : f->kids)
        if (!evalb(c, tr, k, regions)) return false;
      return true;
    case NodeKind::Or:
      for (const auto& c : f->kids)
        if (evalb(c, tr, k, regions)) return true;
      return false;
    case NodeKind::Always: {
      check_step(f, tr, k + f->window.b);
      for (int kp = k + f->window.a; kp <= k + f->window.b; ++kp)
        if (!evalb(f->kids[0], tr, kp, regions)) return false;
      return true;
    }
    case NodeKind::Eventually: {
      check_step(f, tr, k + f->window.b);
      for (int kp = k + f->window.a; kp <= k + f->window.b; ++kp)
        if (evalb(f->kids[0], tr, kp, regions)) return true;
      return false;
    }
    case NodeKind::Until: {
      check_step(f, tr, k + f->window.b);
      for (int kp = k + f->window.a; kp <= k + f->window.b; ++kp) {
        if (!evalb(f->kids[1], tr, kp, regions)) continue;
        bool lhs_holds = true;
        for (int kpp = k; kpp <= kp && lhs_holds; ++kpp)
          lhs_holds = evalb(f->kids[0], tr, kpp, regions);
        if (lhs_holds) return true;
      }
      return false;
    }
  }
  return false;
}

double evalr(const Formula& f, const Trajectory& tr, int k, const RegionMap& regions) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (f->kind) {
    case NodeKind::True:
      return inf;
    case NodeKind::Atom:
      check_step(f, tr, k);
      return f->pred.eval(tr.states[k]);
    case NodeKind::Region: {
      check_step(f, tr, k);
      const auto& box = lookup(regions, f->region);
      const int dims = static_cast<int>(box.lo.size());
      double rho = box_margin(box, tr.states[k].head(dims));
      return f->complemented ? -rho : rho;
    }
    case NodeKind::Not:
      return -evalr(f->kids[0], tr, k, regions);
    case NodeKind::And: {
      double rho = inf;
      for (const auto& c : f->kids) rho = std::min(rho, evalr(c, tr, k, regions));
      return rho;
    }
    case NodeKind::Or: {
      double rho = -inf;
      for (const auto& c : f->kids) rho = std::max(rho, evalr(c, tr, k, regions));
      return rho;
    }
    case NodeKind::Always: {
      check_step(f, tr, k + f->window.b);
      double rho = inf;
      for (int kp = k + f->window.a; kp <= k + f->window.b; ++kp)
        rho = std::min(rho, evalr(f->kids[0], tr, kp, regions));
      return rho;
    }
    case NodeKind::Eventually: {
      check_step(f, tr, k + f->window.b);
      double rho = -inf;
      for (int kp = k + f->window.a; kp <= k + f->window.b; ++kp)
        rho = std::max(rho, evalr(f->kids[0], tr, kp, regions));
      return rho;
    }
    case NodeKind::Until: {
      check_step(f, tr, k + f->window.b);
      double best = -inf;
      for (int kp = k + f->window.a; kp <= k + f->window.b; ++kp) {
        double cand = evalr(f->kids[1], tr, kp, regions);
        for (int kpp = k; kpp <= kp; ++kpp)
          cand = std::min(cand, evalr(f->kids[0], tr, kpp, regions));
        best = std::max(best, cand);
      }
      return best;
    }
  }
  return -inf;
}

}  // namespace

double box_margin(const BoxRegion& box, const Eigen::VectorXd& position) {
  double m = std::numeric_limits<double>::infinity();
  for (int d = 0; d < box.lo.size(); ++d) {
    m = std::min(m, position[d] - box.lo[d]);
    m = std::min(m, box.hi[d] - position[d]);
  }
  return m;
}

bool eval_boolean(const Formula& f, const Trajectory& tr, int k, const RegionMap& regions) {
  return evalb(f, tr, k, regions);
}

double eval_robustness(const Formula& f, const Trajectory& tr, int k, const RegionMap& regions) {
  return evalr(f, tr, k, regions);
}

}  // namespace stlnav::stl
