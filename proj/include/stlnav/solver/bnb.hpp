// Branch-and-bound MILP solve over the LP relaxation. Branching picks the
// most-fractional binary (ties by lowest id); node selection is best-bound
// first (ties FIFO). Fully deterministic for a given problem and params.
#pragma once

#include "stlnav/solver/simplex.hpp"

namespace stlnav::solver {

SolveResult solve_milp(const milp::MilpProblem& p, const SolverParams& params = {});

namespace detail {

// Reusable solver instance: compiled problem shared across repeated solves
// with different row masks (IIS filtering) or a first-incumbent cutoff.
class MilpSolver {
 public:
  MilpSolver(const milp::MilpProblem& p, const SolverParams& params);

  SolveResult solve(const std::vector<std::uint8_t>* rows_enabled = nullptr,
                    bool stop_at_first_incumbent = false);

  const Compiled& compiled() const { return c_; }

 private:
  SolveResult solve_impl(const std::vector<std::uint8_t>* rows_enabled,
                         bool stop_at_first_incumbent, bool zero_objective);

  Compiled c_;
  SolverParams p_;
  LazyLp lp_;
};

}  // namespace detail

}  // namespace stlnav::solver
