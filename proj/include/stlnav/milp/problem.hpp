// Solver-independent MILP model: variables, linear constraints carrying
// STL traceability records, and a sparse linear objective (minimized).
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace stlnav::milp {

enum class VarKind { Continuous, Binary };

struct VarDef {
  int id = -1;
  VarKind kind = VarKind::Continuous;
  double lo = 0.0;
  double hi = 0.0;
  std::string label;
};

enum class Sense { Le, Ge, Eq };

enum class TraceKind {
  PredicateLb,
  PredicateUb,
  AndLink,
  OrLink,
  Root,
  Dynamics,
  Bound,
  SlackLink,
};

const char* trace_kind_name(TraceKind k);

struct TraceRecord {
  int node_id = -1;  // -1 for dynamics/bound rows
  int k = 0;
  TraceKind kind = TraceKind::Dynamics;
  bool removable = false;
};

struct LinConstraint {
  int id = -1;
  std::vector<std::pair<int, double>> terms;  // (var id, coefficient), var ids ascending
  Sense sense = Sense::Le;
  double rhs = 0.0;
  std::optional<TraceRecord> trace;
};

class MilpProblem {
 public:
  int add_var(VarKind kind, double lo, double hi, std::string label);
  int add_constraint(std::vector<std::pair<int, double>> terms, Sense sense, double rhs,
                     std::optional<TraceRecord> trace = std::nullopt);
  void set_objective(std::map<int, double> coeffs);
  void add_objective_term(int var, double coeff);

  const std::vector<VarDef>& vars() const { return vars_; }
  const std::vector<LinConstraint>& constraints() const { return cons_; }
  const std::map<int, double>& objective() const { return objective_; }

  int num_binaries() const;

  // Objective value of a primal point.
  double objective_value(const std::vector<double>& x) const;

 private:
  std::vector<VarDef> vars_;
  std::vector<LinConstraint> cons_;
  std::map<int, double> objective_;
};

// Identical problem with every binary turned into a continuous [0,1] variable.
MilpProblem lp_relaxation(const MilpProblem& p);

// CPLEX LP text format, for cross-checking against external solvers.
std::string to_lp_format(const MilpProblem& p);

// Trace map as JSON: constraint id -> {node, k, kind}.
std::string trace_map_json(const MilpProblem& p);

}  // namespace stlnav::milp
