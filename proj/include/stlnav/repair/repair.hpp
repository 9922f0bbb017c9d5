// Infeasibility repair: map IIS constraints back to STL atomic events, obtain
// per-event repair modes from a pluggable advisor, enforce the safety
// exclusion, drive the relax-resolve loop, and reconstruct the explicit
// repaired specification.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stlnav/encode/encoder.hpp"
#include "stlnav/solver/iis.hpp"
#include "stlnav/stl/printer.hpp"

namespace stlnav::repair {

enum class ParentOp { G, F, ULeft, URight, None };

const char* parent_op_name(ParentOp op);

// Diagnosed conflict tuple (mu, sigma, O, R).
struct AtomicEvent {
  int node = -1;
  std::string predicate;
  std::vector<int> support;  // sorted distinct time steps
  ParentOp op = ParentOp::None;
  std::string role;  // region role name, or "numeric" for raw affine atoms
};

struct DecisionInfo {
  encode::RepairMode mode = encode::RepairMode::Fixed;
  std::string provenance;  // "rule" | "remote" | "safety-override" | "default-fixed"
};

using DecisionLog = std::map<int, DecisionInfo>;

std::vector<AtomicEvent> diagnose(const encode::EncodedProblem& enc, const std::set<int>& iis,
                                  const stl::Formula& f, const world::Scenario& sc);

DecisionLog advise_rule_based(const std::vector<AtomicEvent>& events);

struct RemoteAdvisorConfig {
  std::string endpoint;  // base URL, e.g. http://127.0.0.1:8080
  double timeout_s = 30.0;
  bool fallback_to_rule = false;
};

DecisionLog advise_remote(const RemoteAdvisorConfig& cfg, const std::optional<std::string>& nl,
                          const std::string& stl_text, const std::vector<AtomicEvent>& events);

// Overwrites every obstacle/nofly event to Fixed regardless of the advisor
// output, and fills in Fixed for events the advisor left undecided. Returns
// the node ids whose advisor decision was overridden.
std::vector<int> enforce_safety_policy(const std::vector<AtomicEvent>& events, DecisionLog& log);

// Rewrites the formula per the optimized relaxation magnitudes: predicate
// slacks become loosened offsets (rounded up at 1e-6), temporal extensions
// become widened F/U upper bounds, G releases become shortened windows.
stl::Formula reconstruct_spec(const stl::Formula& f, const world::Scenario& sc,
                              const std::vector<double>& solution,
                              const std::map<int, encode::RepairMode>& decisions,
                              const encode::EncodedProblem& enc, double int_tol = 1e-6);

struct IterationRecord {
  std::vector<AtomicEvent> events;
  DecisionLog decisions;
  std::vector<int> overridden;
  std::map<int, double> slack_used;      // atom node -> rounded max slack
  std::map<int, int> window_changes;     // temporal node -> signed steps
  std::string repaired_text;
};

struct RepairReport {
  int iterations = 0;
  std::vector<IterationRecord> records;
  std::string original_text;
  std::string repaired_text;
  std::string final_status;
  std::string to_json() const;
};

using Advisor = std::function<DecisionLog(const std::vector<AtomicEvent>&)>;

Advisor make_rule_advisor();
Advisor make_remote_advisor(const RemoteAdvisorConfig& cfg, const std::optional<std::string>& nl,
                            const std::string& stl_text);

struct RepairParams {
  encode::EncodeParams enc;
  solver::SolverParams solver;
  int max_iters = 3;
};

struct RepairOutcome {
  solver::SolveStatus status = solver::SolveStatus::Infeasible;
  stl::Trajectory trajectory;  // valid when status == Optimal
  stl::Formula final_formula;
  RepairReport report;
  solver::SolveResult last_solve;
};

// Encode/solve; on infeasibility extract the IIS, diagnose, advise, relax,
// re-solve, reconstruct, then verify by a plain re-encode of the repaired
// formula. Throws UnrepairableConflict when every event is safety-fixed or
// the granted relaxations cannot restore feasibility, MaxItersExceeded when
// the iteration budget runs out.
RepairOutcome repair_loop(const world::Scenario& sc, const stl::Formula& f, const Advisor& advisor,
                          const RepairParams& params);

}  // namespace stlnav::repair
