// Big-M MILP encoding of NNF STL formulas over a scenario: binary
// satisfaction variables per (subformula, step), a global robustness margin
// gamma, dynamics and bound constraints, and -- in repair form -- predicate
// slack variables and penalized temporal window extensions.
#pragma once

#include <map>
#include <set>

#include "stlnav/milp/problem.hpp"
#include "stlnav/stl/nnf.hpp"
#include "stlnav/world/scenario.hpp"

namespace stlnav::encode {

struct EncodeParams {
  double big_m = 0.0;  // <= 0 selects auto sizing from the workspace extent
  double gamma_max = 10.0;
  double lambda_u = 1e-3;
  double lambda_p = 1.0;
  double lambda_t = 1.0;
  double strict_eps = stl::kStrictEps;
};

enum class RepairMode { PredicateRelax, TemporalRelax, Fixed };

const char* repair_mode_name(RepairMode m);

struct EncodedProblem {
  milp::MilpProblem problem;
  stl::Formula formula;  // the encoded NNF formula
  int horizon = 0;
  int dims = 0;
  double dt = 1.0;
  double big_m = 0.0;

  int gamma_var = -1;
  int root_constraint = -1;
  std::vector<std::vector<int>> state_vars;           // [k][0..2*dims)
  std::vector<std::vector<int>> ctrl_pos, ctrl_neg;   // [k][0..dims)
  std::map<std::pair<int, int>, int> z_of;            // (node id, k) -> var id

  struct SlackRef {
    int node, k, face, var;  // face < 0 for plain affine atoms
  };
  std::vector<SlackRef> slacks;

  struct ExtRef {
    int node, k_inst, kprime, var;
  };
  std::vector<ExtRef> extensions;  // F/U deadline extension binaries
  std::vector<ExtRef> releases;    // G right-shrink release binaries
};

// Plain encoding; equivalent to encode_with_relaxation with no decisions.
EncodedProblem encode(const stl::Formula& f, const world::Scenario& sc,
                      const EncodeParams& params = {});

// Repair-form encoding. Decisions are keyed by diagnosed event node ids
// (atoms); TemporalRelax resolves to the atom's nearest temporal ancestor.
EncodedProblem encode_with_relaxation(const stl::Formula& f, const world::Scenario& sc,
                                      const EncodeParams& params,
                                      const std::map<int, RepairMode>& decisions);

stl::Trajectory decode_trajectory(const EncodedProblem& e, const std::vector<double>& x);

double auto_big_m(const stl::Formula& f, const world::Scenario& sc, const EncodeParams& params);

}  // namespace stlnav::encode
