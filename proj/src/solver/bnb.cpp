#include "stlnav/solver/bnb.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <queue>

namespace stlnav::solver {

namespace detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Node {
  long seq = 0;
  int parent = -1;
  int var = -1;  // branching variable; -1 at the root
  double lo = 0.0, hi = 0.0;
};

struct NodeOrder {
  // Min-heap on (bound, seq): best bound first, FIFO on ties.
  bool operator()(const std::pair<double, long>& a, const std::pair<double, long>& b) const {
    if (a.first != b.first) return a.first > b.first;
    return a.second > b.second;
  }
};

int most_fractional(const Compiled& c, const std::vector<double>& x, double int_tol) {
  int best = -1;
  double best_dist = int_tol;
  for (int v : c.binaries) {
    double dist = std::abs(x[v] - std::round(x[v]));
    if (dist > best_dist + 1e-15) {
      best_dist = dist;
      best = v;
    }
  }
  return best;
}

}  // namespace

MilpSolver::MilpSolver(const milp::MilpProblem& p, const SolverParams& params)
    : c_(Compiled::from(p)), p_(params), lp_(c_, params) {}

SolveResult MilpSolver::solve(const std::vector<std::uint8_t>* rows_enabled,
                              bool stop_at_first_incumbent) {
  return solve_impl(rows_enabled, stop_at_first_incumbent, false);
}

SolveResult MilpSolver::solve_impl(const std::vector<std::uint8_t>* rows_enabled,
                                   bool stop_at_first_incumbent, bool zero_objective) {
  auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  SolveResult res;

  std::vector<Node> arena;
  std::priority_queue<std::pair<double, long>, std::vector<std::pair<double, long>>, NodeOrder>
      open;
  long seq = 0;

  bool have_inc = false;
  std::vector<double> inc_x;
  double inc_obj = kInf;

  std::vector<double> lo = c_.lo, hi = c_.hi;
  auto materialize = [&](int idx) {
    lo = c_.lo;
    hi = c_.hi;
    for (int at = idx; at >= 0; at = arena[at].parent) {
      if (arena[at].var >= 0) {
        lo[arena[at].var] = std::max(lo[arena[at].var], arena[at].lo);
        hi[arena[at].var] = std::min(hi[arena[at].var], arena[at].hi);
      }
    }
  };

  auto gap_closed = [&](double bound) {
    if (!have_inc) return false;
    return inc_obj - bound <= p_.rel_gap * std::max(1.0, std::abs(inc_obj));
  };

  auto try_incumbent = [&](const std::vector<double>& x, double obj) {
    if (!have_inc || obj < inc_obj - 1e-12) {
      have_inc = true;
      inc_obj = obj;
      inc_x = x;
    }
  };

  // Deterministic rounding dive; keeps incumbents coming under best-bound
  // node selection, never changes the proven status or objective.
  auto dive = [&](std::vector<double> dlo, std::vector<double> dhi, LpOutcome out) {
    for (size_t step = 0; step <= c_.binaries.size(); ++step) {
      if (out.status != SolveStatus::Optimal) return;
      if (have_inc && out.obj >= inc_obj - 1e-12) return;
      int v = most_fractional(c_, out.x, p_.int_tol);
      if (v < 0) {
        try_incumbent(out.x, out.obj);
        return;
      }
      double fixed = out.x[v] < 0.5 ? 0.0 : 1.0;
      dlo[v] = fixed;
      dhi[v] = fixed;
      out = lp_.solve(dlo, dhi, rows_enabled, zero_objective);
    }
  };

  arena.push_back(Node{seq++, -1, -1, 0.0, 0.0});
  open.push({-kInf, 0});

  long processed = 0;
  bool limit_hit = false;
  bool early_stop = false;
  while (!open.empty()) {
    if (processed >= p_.max_nodes || elapsed() > p_.time_limit_s) {
      limit_hit = true;
      break;
    }
    auto [bound, id] = open.top();
    open.pop();
    if (std::isfinite(bound)) res.best_bound = bound;
    if (gap_closed(bound)) break;
    if (have_inc && bound >= inc_obj - 1e-12) break;

    materialize(static_cast<int>(id));
    LpOutcome out = lp_.solve(lo, hi, rows_enabled, zero_objective);
    ++processed;

    if (out.status == SolveStatus::Infeasible) continue;
    if (out.status == SolveStatus::IterLimit) {
      limit_hit = true;
      break;
    }
    if (out.status == SolveStatus::Unbounded) {
      // Only the root relaxation can be unbounded (children restrict it).
      if (c_.binaries.empty()) {
        res.status = SolveStatus::Unbounded;
        res.node_count = processed;
        res.wall_time_s = elapsed();
        return res;
      }
      SolveResult probe = solve_impl(rows_enabled, true, true);
      res.status = probe.status == SolveStatus::Infeasible ? SolveStatus::Infeasible
                                                           : SolveStatus::Unbounded;
      res.node_count = processed + probe.node_count;
      res.wall_time_s = elapsed();
      return res;
    }

    if (have_inc && out.obj >= inc_obj - 1e-12) continue;

    int v = most_fractional(c_, out.x, p_.int_tol);
    if (v < 0) {
      try_incumbent(out.x, out.obj);
      if (stop_at_first_incumbent) {
        early_stop = true;
        break;
      }
      continue;
    }

    if (processed == 1 || processed % 64 == 0) {
      dive(lo, hi, out);
      if (stop_at_first_incumbent && have_inc) {
        early_stop = true;
        break;
      }
    }

    arena.push_back(Node{seq, static_cast<int>(id), v, 0.0, 0.0});
    open.push({out.obj, seq});
    ++seq;
    arena.push_back(Node{seq, static_cast<int>(id), v, 1.0, 1.0});
    open.push({out.obj, seq});
    ++seq;
  }

  res.node_count = processed;
  res.wall_time_s = elapsed();
  if (limit_hit) {
    res.status = SolveStatus::IterLimit;
    res.partial = true;
    if (have_inc) {
      res.x = inc_x;
      res.objective = inc_obj;
    }
    return res;
  }
  if (have_inc) {
    res.status = SolveStatus::Optimal;
    res.x = inc_x;
    res.objective = inc_obj;
    if (early_stop && !open.empty()) {
      res.partial = true;  // first-feasible cutoff, objective not proven optimal
    } else {
      res.best_bound = inc_obj;
    }
  } else {
    res.status = SolveStatus::Infeasible;
    res.best_bound = kInf;
  }
  return res;
}

}  // namespace detail

SolveResult solve_milp(const milp::MilpProblem& p, const SolverParams& params) {
  detail::MilpSolver ms(p, params);
  return ms.solve();
}

}  // namespace stlnav::solver
