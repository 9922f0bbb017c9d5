#include "stlnav/solver/iis.hpp"

#include <functional>

#include "stlnav/errors.hpp"

namespace stlnav::solver {

std::set<int> extract_iis(const milp::MilpProblem& p, const SolverParams& params) {
  detail::MilpSolver solver(p, params);

  std::vector<std::uint8_t> enabled(p.constraints().size(), 1);
  auto probe = [&]() -> bool {  // true when feasible
    SolveResult r = solver.solve(&enabled, /*stop_at_first_incumbent=*/true);
    if (r.status == SolveStatus::IterLimit)
      throw Error("IIS extraction hit the solver resource limit");
    return r.status != SolveStatus::Infeasible;
  };

  if (probe()) throw NotInfeasible();

  std::vector<int> cand;
  for (const auto& c : p.constraints())
    if (c.trace && c.trace->removable) cand.push_back(c.id);

  std::vector<std::uint8_t> kept(p.constraints().size(), 0);
  for (int id : cand) kept[id] = 1;

  // Tentatively delete a block; if the rest is still infeasible the whole
  // block is unnecessary, otherwise split. Higher-id blocks are examined
  // first, so the surviving conflict is biased toward the earliest rows.
  std::function<void(int, int)> refine = [&](int begin, int end) {
    if (begin >= end) return;
    bool any = false;
    for (int i = begin; i < end; ++i) any = any || kept[cand[i]];
    if (!any) return;
    for (int i = begin; i < end; ++i) enabled[cand[i]] = 0;
    bool feasible_without = probe();
    if (!feasible_without) {
      for (int i = begin; i < end; ++i) kept[cand[i]] = 0;
      return;  // rows stay disabled
    }
    for (int i = begin; i < end; ++i) enabled[cand[i]] = kept[cand[i]];
    if (end - begin == 1) return;  // essential member
    int mid = begin + (end - begin) / 2;
    refine(mid, end);
    refine(begin, mid);
  };

  refine(0, static_cast<int>(cand.size()));

  std::set<int> iis;
  for (int id : cand)
    if (kept[id]) iis.insert(id);
  return iis;
}

}  // namespace stlnav::solver
