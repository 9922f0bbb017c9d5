#include "stlnav/milp/problem.hpp"

#include <algorithm>
#include <json.hpp>
#include <sstream>

#include "stlnav/errors.hpp"
#include "stlnav/numfmt.hpp"

namespace stlnav::milp {

const char* trace_kind_name(TraceKind k) {
  switch (k) {
    case TraceKind::PredicateLb: return "predicate-lb";
    case TraceKind::PredicateUb: return "predicate-ub";
    case TraceKind::AndLink: return "and-link";
    case TraceKind::OrLink: return "or-link";
    case TraceKind::Root: return "root";
    case TraceKind::Dynamics: return "dynamics";
    case TraceKind::Bound: return "bound";
    case TraceKind::SlackLink: return "slack-link";
  }
  return "?";
}

int MilpProblem::add_var(VarKind kind, double lo, double hi, std::string label) {
  if (!(lo <= hi)) throw InvariantViolation("variable '" + label + "' has lo > hi");
  if (kind == VarKind::Binary && (lo < 0.0 || hi > 1.0))
    throw InvariantViolation("binary variable '" + label + "' bounds outside [0,1]");
  VarDef v;
  v.id = static_cast<int>(vars_.size());
  v.kind = kind;
  v.lo = lo;
  v.hi = hi;
  v.label = std::move(label);
  vars_.push_back(std::move(v));
  return vars_.back().id;
}

int MilpProblem::add_constraint(std::vector<std::pair<int, double>> terms, Sense sense, double rhs,
                                std::optional<TraceRecord> trace) {
  if (!std::isfinite(rhs)) throw InvariantViolation("constraint rhs must be finite");
  std::sort(terms.begin(), terms.end());
  bool nonzero = false;
  for (auto& [v, c] : terms) {
    if (v < 0 || v >= static_cast<int>(vars_.size())) throw UnknownVar(v);
    if (c != 0.0) nonzero = true;
  }
  if (!nonzero) throw InvariantViolation("constraint has no nonzero coefficient");
  LinConstraint c;
  c.id = static_cast<int>(cons_.size());
  c.terms = std::move(terms);
  c.sense = sense;
  c.rhs = rhs;
  c.trace = trace;
  cons_.push_back(std::move(c));
  return cons_.back().id;
}

void MilpProblem::set_objective(std::map<int, double> coeffs) {
  for (const auto& [v, c] : coeffs)
    if (v < 0 || v >= static_cast<int>(vars_.size())) throw UnknownVar(v);
  objective_ = std::move(coeffs);
}

void MilpProblem::add_objective_term(int var, double coeff) {
  if (var < 0 || var >= static_cast<int>(vars_.size())) throw UnknownVar(var);
  objective_[var] += coeff;
}

int MilpProblem::num_binaries() const {
  int n = 0;
  for (const auto& v : vars_)
    if (v.kind == VarKind::Binary) ++n;
  return n;
}

double MilpProblem::objective_value(const std::vector<double>& x) const {
  double obj = 0.0;
  for (const auto& [v, c] : objective_) obj += c * x[v];
  return obj;
}

MilpProblem lp_relaxation(const MilpProblem& p) {
  MilpProblem out;
  for (const auto& v : p.vars()) out.add_var(VarKind::Continuous, v.lo, v.hi, v.label);
  for (const auto& c : p.constraints()) out.add_constraint(c.terms, c.sense, c.rhs, c.trace);
  out.set_objective(p.objective());
  return out;
}

std::string to_lp_format(const MilpProblem& p) {
  auto var_name = [&](int id) { return "x" + std::to_string(id); };
  std::ostringstream os;
  os << "Minimize\n obj:";
  bool any = false;
  for (const auto& [v, c] : p.objective()) {
    if (c == 0.0) continue;
    os << (c < 0 ? " - " : (any ? " + " : " ")) << format_double(std::abs(c)) << " "
       << var_name(v);
    any = true;
  }
  if (!any) os << " 0 x0";
  os << "\nSubject To\n";
  for (const auto& c : p.constraints()) {
    os << " c" << c.id << ":";
    bool first = true;
    for (const auto& [v, coef] : c.terms) {
      if (coef == 0.0) continue;
      os << (coef < 0 ? " - " : (first ? " " : " + ")) << format_double(std::abs(coef)) << " "
         << var_name(v);
      first = false;
    }
    const char* rel = c.sense == Sense::Le ? "<=" : c.sense == Sense::Ge ? ">=" : "=";
    os << " " << rel << " " << format_double(c.rhs) << "\n";
  }
  os << "Bounds\n";
  for (const auto& v : p.vars()) {
    os << " ";
    if (std::isinf(v.lo))
      os << "-inf";
    else
      os << format_double(v.lo);
    os << " <= " << var_name(v.id) << " <= ";
    if (std::isinf(v.hi))
      os << "+inf";
    else
      os << format_double(v.hi);
    os << "\n";
  }
  bool has_bin = false;
  for (const auto& v : p.vars()) {
    if (v.kind != VarKind::Binary) continue;
    if (!has_bin) os << "Binaries\n";
    has_bin = true;
    os << " " << var_name(v.id);
  }
  if (has_bin) os << "\n";
  os << "End\n";
  return os.str();
}

std::string trace_map_json(const MilpProblem& p) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& c : p.constraints()) {
    if (!c.trace) continue;
    j[std::to_string(c.id)] = {{"node", c.trace->node_id},
                               {"k", c.trace->k},
                               {"kind", trace_kind_name(c.trace->kind)}};
  }
  return j.dump(2) + "\n";
}

}  // namespace stlnav::milp
