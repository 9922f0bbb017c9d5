#include "stlnav/repair/repair.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "stlnav/errors.hpp"
#include "stlnav/numfmt.hpp"
#include "stlnav/stl/semantics.hpp"

namespace stlnav::repair {

using encode::RepairMode;
using nlohmann::json;
using stl::Formula;
using stl::NodeKind;

const char* parent_op_name(ParentOp op) {
  switch (op) {
    case ParentOp::G: return "G";
    case ParentOp::F: return "F";
    case ParentOp::ULeft: return "U-left";
    case ParentOp::URight: return "U-right";
    case ParentOp::None: return "none";
  }
  return "?";
}

namespace {

struct AtomContext {
  ParentOp op = ParentOp::None;
  std::string role = "numeric";
  std::string text;
};

// Nearest temporal ancestor (with Until side) and role for every atom node.
std::map<int, AtomContext> atom_contexts(const Formula& f, const world::Scenario& sc) {
  std::map<int, AtomContext> out;
  std::function<void(const Formula&, ParentOp)> dfs = [&](const Formula& n, ParentOp op) {
    if (n->is_atom()) {
      AtomContext ctx;
      ctx.op = op;
      if (n->kind == NodeKind::Region) {
        const world::Region* r = sc.find_region(n->region);
        ctx.role = r ? world::role_name(r->role) : "numeric";
        ctx.text = n->region + (n->complemented ? "-avoidance" : "-membership");
      } else {
        ctx.text = stl::print_canonical(n);
      }
      out[n->id] = std::move(ctx);
      return;
    }
    switch (n->kind) {
      case NodeKind::Always:
        dfs(n->kids[0], ParentOp::G);
        break;
      case NodeKind::Eventually:
        dfs(n->kids[0], ParentOp::F);
        break;
      case NodeKind::Until:
        dfs(n->kids[0], ParentOp::ULeft);
        dfs(n->kids[1], ParentOp::URight);
        break;
      default:
        for (const auto& k : n->kids) dfs(k, op);
        break;
    }
  };
  dfs(f, ParentOp::None);
  return out;
}

void collect_atom_leaves(const Formula& n, std::vector<int>& out) {
  if (n->is_atom()) {
    out.push_back(n->id);
    return;
  }
  for (const auto& k : n->kids) collect_atom_leaves(k, out);
}

std::string mode_string(RepairMode m) { return encode::repair_mode_name(m); }

[[maybe_unused]] RepairMode mode_from_string(const std::string& s) {
  if (s == "predicate") return RepairMode::PredicateRelax;
  if (s == "temporal") return RepairMode::TemporalRelax;
  if (s == "fixed") return RepairMode::Fixed;
  throw MalformedResponse("unknown repair mode '" + s + "'");
}

}  // namespace

std::vector<AtomicEvent> diagnose(const encode::EncodedProblem& enc, const std::set<int>& iis,
                                  const stl::Formula& f, const world::Scenario& sc) {
  if (iis.empty()) throw Error("diagnose requires a nonempty IIS");
  auto contexts = atom_contexts(f, sc);

  std::map<int, std::set<int>> buckets;  // atom node -> support steps
  std::vector<std::pair<int, int>> interior;  // (node, k) rows without an atom node
  for (int cid : iis) {
    if (cid < 0 || cid >= static_cast<int>(enc.problem.constraints().size()))
      throw UntracedConstraint(cid);
    const auto& con = enc.problem.constraints()[cid];
    if (!con.trace || con.trace->node_id < 0) throw UntracedConstraint(cid);
    int node = con.trace->node_id;
    if (contexts.count(node)) {
      buckets[node].insert(con.trace->k);
    } else {
      interior.emplace_back(node, con.trace->k);
    }
  }
  // When no atom-level rows are in the conflict, attribute interior rows to
  // their descendant atoms over the row's window.
  if (buckets.empty()) {
    for (const auto& [node_id, k] : interior) {
      Formula n = stl::find_node(f, node_id);
      if (!n) throw UntracedConstraint(node_id);
      std::vector<int> leaves;
      collect_atom_leaves(n, leaves);
      int lo = k, hi = k;
      if (n->is_temporal()) {
        lo = k + n->window.a;
        hi = k + n->window.b;
      }
      for (int leaf : leaves)
        for (int kk = lo; kk <= hi; ++kk) buckets[leaf].insert(kk);
    }
  }

  std::vector<AtomicEvent> events;
  for (const auto& [node, steps] : buckets) {
    const AtomContext& ctx = contexts.at(node);
    AtomicEvent ev;
    ev.node = node;
    ev.predicate = ctx.text;
    ev.support.assign(steps.begin(), steps.end());
    ev.op = ctx.op;
    ev.role = ctx.role;
    events.push_back(std::move(ev));
  }
  return events;  // map iteration is already sorted by node id
}

DecisionLog advise_rule_based(const std::vector<AtomicEvent>& events) {
  DecisionLog log;
  for (const auto& ev : events) {
    RepairMode mode;
    if (ev.role == "obstacle" || ev.role == "nofly") {
      mode = RepairMode::Fixed;
    } else if (ev.op == ParentOp::F || ev.op == ParentOp::URight) {
      mode = RepairMode::TemporalRelax;
    } else if (ev.op == ParentOp::G &&
               (ev.role == "goal" || ev.role == "target" || ev.role == "search")) {
      mode = RepairMode::TemporalRelax;
    } else {
      mode = RepairMode::PredicateRelax;
    }
    log[ev.node] = {mode, "rule"};
  }
  return log;
}

std::vector<int> enforce_safety_policy(const std::vector<AtomicEvent>& events, DecisionLog& log) {
  std::vector<int> overridden;
  for (const auto& ev : events) {
    bool safety = ev.role == "obstacle" || ev.role == "nofly";
    auto it = log.find(ev.node);
    if (it == log.end()) {
      log[ev.node] = {RepairMode::Fixed, "default-fixed"};
      continue;
    }
    if (safety && it->second.mode != RepairMode::Fixed) {
      it->second = {RepairMode::Fixed, "safety-override"};
      overridden.push_back(ev.node);
    }
  }
  return overridden;
}

stl::Formula reconstruct_spec(const stl::Formula& f, const world::Scenario& sc,
                              const std::vector<double>& solution,
                              const std::map<int, encode::RepairMode>& decisions,
                              const encode::EncodedProblem& enc, double int_tol) {
  const double strict_eps = stl::kStrictEps;
  // Max predicate slack per (node, face), rounded up at 1e-6 granularity.
  std::map<std::pair<int, int>, double> slack;
  for (const auto& s : enc.slacks) {
    double v = solution[s.var];
    auto key = std::make_pair(s.node, s.face);
    slack[key] = std::max(slack[key], v);
  }
  auto round_up = [](double v) {
    if (v < 1e-9) return 0.0;
    return std::ceil(v * 1e6 - 1e-9) / 1e6;
  };
  for (auto& [key, v] : slack) v = round_up(v);

  // Largest activated extension per temporal node, in steps past the bound.
  std::map<int, int> extension;
  for (const auto& w : enc.extensions) {
    if (solution[w.var] < 1.0 - int_tol) continue;
    Formula node = stl::find_node(f, w.node);
    int past = w.kprime - (w.k_inst + node->window.b);
    extension[w.node] = std::max(extension[w.node], past);
  }
  // New enforced upper bound per released G node (right shrink).
  std::map<int, int> shrink_b;  // node -> new b (relative)
  {
    std::map<int, std::map<int, std::vector<std::pair<int, int>>>> by_node_inst;
    for (const auto& r : enc.releases) by_node_inst[r.node][r.k_inst].push_back({r.kprime, r.var});
    for (auto& [node_id, insts] : by_node_inst) {
      Formula node = stl::find_node(f, node_id);
      int new_b = -1;
      bool any_release = false;
      for (auto& [k_inst, vars] : insts) {
        int last_enforced = k_inst + node->window.a;  // first step is never released
        for (auto& [kprime, var] : vars) {
          if (solution[var] < 1.0 - int_tol)
            last_enforced = std::max(last_enforced, kprime);
          else
            any_release = true;
        }
        new_b = std::max(new_b, last_enforced - k_inst);
      }
      if (any_release) shrink_b[node_id] = new_b;
    }
  }

  bool changed = false;
  stl::FormulaBuilder fresh(stl::max_node_id(f) + 1);

  std::function<Formula(const Formula&)> rebuild = [&](const Formula& n) -> Formula {
    // Predicate relaxation on atoms.
    auto dec = decisions.find(n->id);
    bool pred_relaxed = dec != decisions.end() && dec->second == RepairMode::PredicateRelax;
    if (n->kind == NodeKind::Atom && pred_relaxed) {
      double s = 0.0;
      auto it = slack.find({n->id, -1});
      if (it != slack.end()) s = it->second;
      if (s <= 0.0) return n;
      changed = true;
      auto m = std::make_shared<stl::Node>(*n);
      m->pred.offset += s;
      return m;
    }
    if (n->kind == NodeKind::Region && pred_relaxed) {
      const world::Region* r = sc.find_region(n->region);
      if (!r) throw UnknownRegion(n->region);
      auto faces = n->complemented ? world::complement_atoms(*r, strict_eps)
                                   : world::membership_atoms(*r);
      bool any = false;
      for (size_t face = 0; face < faces.size(); ++face) {
        auto it = slack.find({n->id, static_cast<int>(face)});
        if (it != slack.end() && it->second > 0.0) {
          faces[face].offset += it->second;
          any = true;
        }
      }
      if (!any) return n;
      // The region reference becomes its explicit face glue with loosened
      // offsets, so the adjusted thresholds are visible in the formula text.
      changed = true;
      std::vector<Formula> atoms;
      for (auto& fa : faces) atoms.push_back(fresh.atom(std::move(fa)));
      return n->complemented ? fresh.disj(std::move(atoms)) : fresh.conj(std::move(atoms));
    }

    std::vector<Formula> kids;
    kids.reserve(n->kids.size());
    bool kid_changed = false;
    for (const auto& k : n->kids) {
      Formula nk = rebuild(k);
      kid_changed = kid_changed || nk != k;
      kids.push_back(std::move(nk));
    }

    int ext = 0;
    auto eit = extension.find(n->id);
    if (eit != extension.end()) ext = eit->second;
    auto sit = shrink_b.find(n->id);

    if (ext == 0 && sit == shrink_b.end() && !kid_changed) return n;
    auto m = std::make_shared<stl::Node>(*n);
    m->kids = std::move(kids);
    if (ext > 0) {
      m->window.b += ext;
      changed = true;
    }
    if (sit != shrink_b.end()) {
      m->window.b = std::max(n->window.a, sit->second);
      changed = true;
    }
    return m;
  };

  Formula out = rebuild(f);
  if (!changed) throw NoRelaxationUsed();
  return out;
}

// --- advisors ---

Advisor make_rule_advisor() {
  return [](const std::vector<AtomicEvent>& events) { return advise_rule_based(events); };
}

// --- repair report ---

static json event_json(const AtomicEvent& ev) {
  json j;
  j["node"] = ev.node;
  j["predicate"] = ev.predicate;
  j["support"] = {ev.support.empty() ? 0 : ev.support.front(),
                  ev.support.empty() ? 0 : ev.support.back()};
  j["operator"] = parent_op_name(ev.op);
  j["role"] = ev.role;
  return j;
}

std::string RepairReport::to_json() const {
  json j;
  j["iterations"] = iterations;
  j["original"] = original_text;
  j["repaired"] = repaired_text;
  j["final_status"] = final_status;
  j["records"] = json::array();
  for (const auto& rec : records) {
    json r;
    r["events"] = json::array();
    for (const auto& ev : rec.events) r["events"].push_back(event_json(ev));
    r["decisions"] = json::array();
    for (const auto& [node, info] : rec.decisions) {
      r["decisions"].push_back(
          {{"node", node}, {"mode", mode_string(info.mode)}, {"provenance", info.provenance}});
    }
    r["overridden"] = rec.overridden;
    r["slack_used"] = json::object();
    for (const auto& [node, v] : rec.slack_used) r["slack_used"][std::to_string(node)] = v;
    r["window_changes"] = json::object();
    for (const auto& [node, v] : rec.window_changes)
      r["window_changes"][std::to_string(node)] = v;
    r["repaired"] = rec.repaired_text;
    j["records"].push_back(std::move(r));
  }
  return j.dump(2) + "\n";
}

// --- repair loop ---

RepairOutcome repair_loop(const world::Scenario& sc, const stl::Formula& f, const Advisor& advisor,
                          const RepairParams& params) {
  RepairOutcome out;
  Formula current = f;
  out.report.original_text = stl::print_canonical(f);
  const auto regions = sc.region_map();

  int iter = 0;
  while (true) {
    encode::EncodedProblem plain = encode::encode(current, sc, params.enc);
    solver::SolveResult res = solver::solve_milp(plain.problem, params.solver);
    if (res.status == solver::SolveStatus::Optimal) {
      stl::Trajectory tr = encode::decode_trajectory(plain, res.x);
      if (!stl::eval_boolean(current, tr, 0, regions) ||
          stl::eval_robustness(current, tr, 0, regions) < -1e-6)
        throw Error("optimal solve decoded to a trajectory violating the formula");
      out.status = res.status;
      out.trajectory = std::move(tr);
      out.final_formula = current;
      out.report.iterations = iter;
      out.report.repaired_text = stl::print_canonical(current);
      out.report.final_status = "optimal";
      out.last_solve = std::move(res);
      return out;
    }
    if (res.status != solver::SolveStatus::Infeasible) {
      out.status = res.status;
      out.final_formula = current;
      out.report.iterations = iter;
      out.report.repaired_text = stl::print_canonical(current);
      out.report.final_status = "resource-limit";
      out.last_solve = std::move(res);
      return out;
    }
    if (iter >= params.max_iters) throw MaxItersExceeded(params.max_iters);
    ++iter;

    std::set<int> iis = solver::extract_iis(plain.problem, params.solver);
    std::vector<AtomicEvent> events = diagnose(plain, iis, current, sc);
    DecisionLog log = advisor(events);
    std::vector<int> overridden = enforce_safety_policy(events, log);

    std::map<int, RepairMode> decisions;
    bool any_relax = false;
    for (const auto& [node, info] : log) {
      decisions[node] = info.mode;
      any_relax = any_relax || info.mode != RepairMode::Fixed;
    }
    if (!any_relax) throw UnrepairableConflict("every diagnosed event is safety-fixed");

    encode::EncodedProblem relaxed =
        encode::encode_with_relaxation(current, sc, params.enc, decisions);
    solver::SolveResult rres = solver::solve_milp(relaxed.problem, params.solver);
    if (rres.status == solver::SolveStatus::Infeasible)
      throw UnrepairableConflict("granted relaxations cannot restore feasibility");
    if (rres.status != solver::SolveStatus::Optimal) {
      out.status = rres.status;
      out.final_formula = current;
      out.report.iterations = iter;
      out.report.repaired_text = stl::print_canonical(current);
      out.report.final_status = "resource-limit";
      out.last_solve = std::move(rres);
      return out;
    }

    Formula repaired =
        reconstruct_spec(current, sc, rres.x, decisions, relaxed, params.solver.int_tol);

    IterationRecord rec;
    rec.events = events;
    rec.decisions = log;
    rec.overridden = overridden;
    for (const auto& s : relaxed.slacks) {
      double v = rres.x[s.var];
      if (v > 1e-9)
        rec.slack_used[s.node] = std::max(rec.slack_used[s.node], v);
    }
    {
      std::function<void(const Formula&, const Formula&)> diff = [&](const Formula& a,
                                                                     const Formula& b) {
        if (a->is_temporal() && a->window.b != b->window.b)
          rec.window_changes[a->id] = b->window.b - a->window.b;
        for (size_t i = 0; i < a->kids.size() && i < b->kids.size(); ++i)
          diff(a->kids[i], b->kids[i]);
      };
      diff(current, repaired);
    }
    rec.repaired_text = stl::print_canonical(repaired);
    out.report.records.push_back(std::move(rec));

    current = repaired;
  }
}

}  // namespace stlnav::repair
