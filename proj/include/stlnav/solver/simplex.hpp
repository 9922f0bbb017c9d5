// Exact LP solving: bounded-variable revised simplex (two-phase, Bland's rule
// on degeneracy) behind a violated-row activation loop, so only the rows that
// actually bind enter the working tableau.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <limits>
#include <vector>

#include "stlnav/milp/problem.hpp"

namespace stlnav::solver {

enum class SolveStatus { Optimal, Infeasible, Unbounded, IterLimit };

const char* status_name(SolveStatus s);

struct SolverParams {
  double feas_tol = 1e-7;
  double int_tol = 1e-6;
  double rel_gap = 1e-6;
  long max_nodes = 1000000;
  double time_limit_s = std::numeric_limits<double>::infinity();
  long max_lp_iters = 500000;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  std::vector<double> x;  // structural values; present iff Optimal (or flagged incumbent)
  double objective = std::numeric_limits<double>::quiet_NaN();
  long node_count = 0;
  double wall_time_s = 0.0;
  bool partial = false;  // node/time limit hit, x holds the incumbent if any
  double best_bound = -std::numeric_limits<double>::infinity();
  // LP-only extras for dual certificates:
  std::vector<double> row_dual;
  std::vector<double> reduced_cost;
};

namespace detail {

struct CompiledRow {
  std::vector<std::pair<int, double>> terms;
  milp::Sense sense = milp::Sense::Le;
  double rhs = 0.0;
  double scale = 1.0;  // max(1, max |coef|), for scaled feasibility
};

// Column-oriented immutable view of a MilpProblem.
struct Compiled {
  int n = 0;
  std::vector<double> lo, hi, cost;
  std::vector<std::uint8_t> binary;
  std::vector<int> binaries;  // ids of binary vars, ascending
  std::vector<CompiledRow> rows;
  std::vector<std::vector<std::pair<int, double>>> cols;  // var -> (row, coef)

  static Compiled from(const milp::MilpProblem& p);
};

struct LpOutcome {
  SolveStatus status = SolveStatus::Infeasible;
  std::vector<double> x;
  double obj = 0.0;
  std::vector<double> row_dual;      // per problem row, 0 when inactive
  std::vector<double> reduced_cost;  // per structural var
  long iters = 0;
};

class LpEngine;

// LP solver with persistent state: the basis, its inverse and the activated
// row set carry across solves, so bound changes (branching, row masks) are
// repaired with a handful of pivots instead of a from-scratch solve. One
// instance per branch-and-bound run; the call sequence is deterministic, so
// results are too.
class LazyLp {
 public:
  LazyLp(const Compiled& c, const SolverParams& p);
  ~LazyLp();

  // lo/hi: bound arrays (node bounds). rows_enabled: optional row mask.
  // zero_objective: solve a pure feasibility problem.
  LpOutcome solve(const std::vector<double>& lo, const std::vector<double>& hi,
                  const std::vector<std::uint8_t>* rows_enabled = nullptr,
                  bool zero_objective = false, bool want_duals = false);

 private:
  const Compiled& c_;
  SolverParams p_;
  std::unique_ptr<LpEngine> engine_;
};

}  // namespace detail

// Exact LP solve; the problem must contain no binary variables.
SolveResult solve_lp(const milp::MilpProblem& p, const SolverParams& params = {});

}  // namespace stlnav::solver
