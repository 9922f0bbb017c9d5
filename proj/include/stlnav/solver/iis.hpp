// Irreducibly infeasible subsystem extraction by deletion filtering over the
// removable (specification-traced) constraints. Dynamics, initial-state and
// bound rows form an immutable core that is never reported.
#pragma once

#include <set>

#include "stlnav/solver/bnb.hpp"

namespace stlnav::solver {

// Requires the problem to be infeasible (else NotInfeasible). The returned
// constraint ids S satisfy: core + S is infeasible, and core + S minus any
// single member is feasible.
std::set<int> extract_iis(const milp::MilpProblem& p, const SolverParams& params = {});

}  // namespace stlnav::solver
