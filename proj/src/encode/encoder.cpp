#include "stlnav/encode/encoder.hpp"

#include <algorithm>

#include "stlnav/errors.hpp"

namespace stlnav::encode {

using milp::Sense;
using milp::TraceKind;
using milp::TraceRecord;
using milp::VarKind;
using stl::Formula;
using stl::NodeKind;

const char* repair_mode_name(RepairMode m) {
  switch (m) {
    case RepairMode::PredicateRelax: return "predicate";
    case RepairMode::TemporalRelax: return "temporal";
    case RepairMode::Fixed: return "fixed";
  }
  return "?";
}

double auto_big_m(const stl::Formula& f, const world::Scenario& sc, const EncodeParams& params) {
  const int d = sc.dims();
  Eigen::VectorXd extent(2 * d);
  for (int i = 0; i < d; ++i) {
    extent[i] = std::max(std::abs(sc.ws_lo[i]), std::abs(sc.ws_hi[i]));
    extent[d + i] = sc.vmax;
  }
  double m = 0.0;
  auto consider = [&](const stl::AtomicPredicate& p) {
    m = std::max(m, p.coeffs.cwiseAbs().dot(extent) + std::abs(p.offset));
  };
  stl::walk(f, [&](const Formula& n) {
    if (n->kind == NodeKind::Atom) consider(n->pred);
    if (n->kind == NodeKind::Region) {
      const world::Region* r = sc.find_region(n->region);
      if (!r) throw UnknownRegion(n->region);
      for (const auto& a : world::membership_atoms(*r)) consider(a);
      for (const auto& a : world::complement_atoms(*r, params.strict_eps)) consider(a);
    }
  });
  return m + params.gamma_max + 1.0;
}

namespace {

class Encoder {
 public:
  Encoder(const stl::Formula& f, const world::Scenario& sc, const EncodeParams& prm,
          const std::map<int, RepairMode>& decisions)
      : f_(f), sc_(sc), prm_(prm), decisions_(decisions) {}

  EncodedProblem run() {
    if (!stl::is_nnf(f_)) {
      stl::walk(f_, [&](const Formula& n) {
        if (n->kind == NodeKind::Not) throw NotNNF(n->id);
      });
    }
    resolve_decisions();

    e_.formula = f_;
    e_.horizon = sc_.horizon;
    e_.dims = sc_.dims();
    e_.dt = sc_.dt;
    e_.big_m = prm_.big_m > 0 ? prm_.big_m : auto_big_m(f_, sc_, prm_);
    M_ = e_.big_m;
    H_ = sc_.horizon;
    d_ = sc_.dims();

    make_state_vars();
    make_dynamics_rows();
    int z_root = enc(f_, 0);
    e_.root_constraint =
        p().add_constraint({{z_root, 1.0}}, Sense::Eq, 1.0,
                           TraceRecord{f_->id, 0, TraceKind::Root, true});
    make_objective();
    return std::move(e_);
  }

 private:
  milp::MilpProblem& p() { return e_.problem; }

  void resolve_decisions() {
    for (const auto& [node_id, mode] : decisions_) {
      Formula node = stl::find_node(f_, node_id);
      if (!node) throw UnknownDecisionNode(node_id);
      if (mode == RepairMode::Fixed) continue;
      if (node->kind == NodeKind::Region) {
        const world::Region* r = sc_.find_region(node->region);
        if (r && world::is_safety_role(r->role)) throw SafetyRelaxAttempt(node_id);
      }
      if (mode == RepairMode::PredicateRelax) {
        if (!node->is_atom()) throw UnknownDecisionNode(node_id);
        pred_relaxed_.insert(node_id);
      } else {
        int anc = node->is_temporal() ? node_id : nearest_temporal_ancestor(node_id);
        if (anc < 0) throw UnknownDecisionNode(node_id);
        temporal_relaxed_.insert(anc);
      }
    }
  }

  int nearest_temporal_ancestor(int node_id) const {
    int found = -1;
    std::function<bool(const Formula&, int)> dfs = [&](const Formula& n, int anc) {
      if (n->id == node_id) {
        found = anc;
        return true;
      }
      int next = n->is_temporal() ? n->id : anc;
      for (const auto& k : n->kids)
        if (dfs(k, next)) return true;
      return false;
    };
    dfs(f_, -1);
    return found;
  }

  void make_state_vars() {
    e_.state_vars.assign(H_ + 1, std::vector<int>(2 * d_, -1));
    for (int k = 0; k <= H_; ++k) {
      for (int j = 0; j < 2 * d_; ++j) {
        double lo, hi;
        if (j < d_) {
          lo = sc_.ws_lo[j];
          hi = sc_.ws_hi[j];
        } else {
          lo = -sc_.vmax;
          hi = sc_.vmax;
        }
        if (k == 0) lo = hi = sc_.x0[j];
        e_.state_vars[k][j] = p().add_var(VarKind::Continuous, lo, hi,
                                          "x" + std::to_string(k) + "_" + std::to_string(j));
      }
    }
    e_.ctrl_pos.assign(H_, std::vector<int>(d_, -1));
    e_.ctrl_neg.assign(H_, std::vector<int>(d_, -1));
    for (int k = 0; k < H_; ++k) {
      for (int j = 0; j < d_; ++j) {
        e_.ctrl_pos[k][j] = p().add_var(VarKind::Continuous, 0.0, sc_.amax,
                                        "up" + std::to_string(k) + "_" + std::to_string(j));
        e_.ctrl_neg[k][j] = p().add_var(VarKind::Continuous, 0.0, sc_.amax,
                                        "un" + std::to_string(k) + "_" + std::to_string(j));
      }
    }
    e_.gamma_var = p().add_var(VarKind::Continuous, 0.0, prm_.gamma_max, "gamma");
  }

  void make_dynamics_rows() {
    const double dt = sc_.dt;
    for (int k = 0; k < H_; ++k) {
      for (int j = 0; j < d_; ++j) {
        // p_{k+1,j} = p_{k,j} + dt v_{k,j} + dt^2/2 u_{k,j}
        p().add_constraint({{e_.state_vars[k + 1][j], 1.0},
                            {e_.state_vars[k][j], -1.0},
                            {e_.state_vars[k][d_ + j], -dt},
                            {e_.ctrl_pos[k][j], -0.5 * dt * dt},
                            {e_.ctrl_neg[k][j], 0.5 * dt * dt}},
                           Sense::Eq, 0.0, TraceRecord{-1, k, TraceKind::Dynamics, false});
        // v_{k+1,j} = v_{k,j} + dt u_{k,j}
        p().add_constraint({{e_.state_vars[k + 1][d_ + j], 1.0},
                            {e_.state_vars[k][d_ + j], -1.0},
                            {e_.ctrl_pos[k][j], -dt},
                            {e_.ctrl_neg[k][j], dt}},
                           Sense::Eq, 0.0, TraceRecord{-1, k, TraceKind::Dynamics, false});
      }
    }
  }

  // Two Big-M rows tying z to the margin of g at step k; optional slack on
  // the lower row for predicate relaxation.
  void bigm_rows(const stl::AtomicPredicate& g, int k, int z, int node_id, int slack_var) {
    std::vector<std::pair<int, double>> terms;
    for (int j = 0; j < g.coeffs.size(); ++j)
      if (g.coeffs[j] != 0.0) terms.emplace_back(e_.state_vars[k][j], g.coeffs[j]);
    terms.emplace_back(z, -M_);
    terms.emplace_back(e_.gamma_var, -1.0);
    auto lb_terms = terms;
    if (slack_var >= 0) lb_terms.emplace_back(slack_var, 1.0);
    p().add_constraint(std::move(lb_terms), Sense::Ge, -g.offset - M_,
                       TraceRecord{node_id, k, TraceKind::PredicateLb, true});
    p().add_constraint(std::move(terms), Sense::Le, -g.offset,
                       TraceRecord{node_id, k, TraceKind::PredicateUb, true});
  }

  int new_z(const std::string& label) { return p().add_var(VarKind::Binary, 0.0, 1.0, label); }

  int maybe_slack(int node_id, int k, int face) {
    if (!pred_relaxed_.count(node_id)) return -1;
    int s = p().add_var(VarKind::Continuous, 0.0, std::numeric_limits<double>::infinity(),
                        "s_" + std::to_string(node_id) + "_" + std::to_string(k) +
                            (face >= 0 ? "_f" + std::to_string(face) : ""));
    e_.slacks.push_back({node_id, k, face, s});
    objective_[s] += prm_.lambda_p;
    return s;
  }

  void check_horizon(const Formula& n, int k) {
    if (k + n->window.b > H_) throw HorizonExceeded(n->id, k + n->window.b);
  }

  int enc(const Formula& n, int k) {
    auto key = std::make_pair(n->id, k);
    auto it = e_.z_of.find(key);
    if (it != e_.z_of.end()) return it->second;
    if (k > H_) throw HorizonExceeded(n->id, k);

    const std::string tag = "z_" + std::to_string(n->id) + "_" + std::to_string(k);
    int z = -1;
    switch (n->kind) {
      case NodeKind::True:
        z = p().add_var(VarKind::Binary, 1.0, 1.0, tag);
        break;
      case NodeKind::Atom: {
        z = new_z(tag);
        bigm_rows(n->pred, k, z, n->id, maybe_slack(n->id, k, -1));
        break;
      }
      case NodeKind::Region: {
        const world::Region* r = sc_.find_region(n->region);
        if (!r) throw UnknownRegion(n->region);
        auto faces = n->complemented ? world::complement_atoms(*r, prm_.strict_eps)
                                     : world::membership_atoms(*r);
        z = new_z(tag);
        std::vector<int> face_z;
        for (size_t fi = 0; fi < faces.size(); ++fi) {
          int zf = new_z(tag + "_f" + std::to_string(fi));
          bigm_rows(faces[fi], k, zf, n->id, maybe_slack(n->id, k, static_cast<int>(fi)));
          face_z.push_back(zf);
        }
        if (n->complemented) {
          std::vector<std::pair<int, double>> row{{z, 1.0}};
          for (int zf : face_z) row.emplace_back(zf, -1.0);
          p().add_constraint(std::move(row), Sense::Le, 0.0,
                             TraceRecord{n->id, k, TraceKind::OrLink, true});
        } else {
          for (int zf : face_z)
            p().add_constraint({{z, 1.0}, {zf, -1.0}}, Sense::Le, 0.0,
                               TraceRecord{n->id, k, TraceKind::AndLink, true});
        }
        break;
      }
      case NodeKind::Not:
        throw NotNNF(n->id);
      case NodeKind::And: {
        z = new_z(tag);
        for (const auto& c : n->kids) {
          int zc = enc(c, k);
          p().add_constraint({{z, 1.0}, {zc, -1.0}}, Sense::Le, 0.0,
                             TraceRecord{n->id, k, TraceKind::AndLink, true});
        }
        break;
      }
      case NodeKind::Or: {
        z = new_z(tag);
        std::vector<std::pair<int, double>> row{{z, 1.0}};
        for (const auto& c : n->kids) row.emplace_back(enc(c, k), -1.0);
        p().add_constraint(std::move(row), Sense::Le, 0.0,
                           TraceRecord{n->id, k, TraceKind::OrLink, true});
        break;
      }
      case NodeKind::Always: {
        check_horizon(n, k);
        z = new_z(tag);
        bool relax = temporal_relaxed_.count(n->id) > 0;
        std::vector<int> rel;
        for (int kp = k + n->window.a; kp <= k + n->window.b; ++kp) {
          int zc = enc(n->kids[0], kp);
          if (relax && kp > k + n->window.a) {
            int rv = p().add_var(VarKind::Binary, 0.0, 1.0,
                                 "r_" + std::to_string(n->id) + "_" + std::to_string(k) + "_" +
                                     std::to_string(kp));
            e_.releases.push_back({n->id, k, kp, rv});
            objective_[rv] += prm_.lambda_t * sc_.dt;
            p().add_constraint({{z, 1.0}, {zc, -1.0}, {rv, -1.0}}, Sense::Le, 0.0,
                               TraceRecord{n->id, kp, TraceKind::AndLink, true});
            if (!rel.empty())
              p().add_constraint({{rel.back(), 1.0}, {rv, -1.0}}, Sense::Le, 0.0,
                                 TraceRecord{n->id, kp, TraceKind::SlackLink, true});
            rel.push_back(rv);
          } else {
            p().add_constraint({{z, 1.0}, {zc, -1.0}}, Sense::Le, 0.0,
                               TraceRecord{n->id, kp, TraceKind::AndLink, true});
          }
        }
        break;
      }
      case NodeKind::Eventually: {
        check_horizon(n, k);
        z = new_z(tag);
        std::vector<std::pair<int, double>> row{{z, 1.0}};
        for (int kp = k + n->window.a; kp <= k + n->window.b; ++kp)
          row.emplace_back(enc(n->kids[0], kp), -1.0);
        if (temporal_relaxed_.count(n->id)) {
          for (int kp = k + n->window.b + 1; kp <= H_; ++kp) {
            int zc = enc(n->kids[0], kp);
            int w = p().add_var(VarKind::Binary, 0.0, 1.0,
                                "w_" + std::to_string(n->id) + "_" + std::to_string(k) + "_" +
                                    std::to_string(kp));
            e_.extensions.push_back({n->id, k, kp, w});
            objective_[w] += prm_.lambda_t * sc_.dt * (kp - (k + n->window.b));
            p().add_constraint({{w, 1.0}, {zc, -1.0}}, Sense::Le, 0.0,
                               TraceRecord{n->id, kp, TraceKind::SlackLink, true});
            row.emplace_back(w, -1.0);
          }
        }
        p().add_constraint(std::move(row), Sense::Le, 0.0,
                           TraceRecord{n->id, k, TraceKind::OrLink, true});
        break;
      }
      case NodeKind::Until: {
        check_horizon(n, k);
        z = new_z(tag);
        std::vector<std::pair<int, double>> row{{z, 1.0}};
        bool relax = temporal_relaxed_.count(n->id) > 0;
        int last = relax ? H_ : k + n->window.b;
        for (int kp = k + n->window.a; kp <= last; ++kp) {
          bool ext = kp > k + n->window.b;
          TraceKind link_kind = ext ? TraceKind::SlackLink : TraceKind::AndLink;
          int w = p().add_var(VarKind::Binary, 0.0, 1.0,
                              "w_" + std::to_string(n->id) + "_" + std::to_string(k) + "_" +
                                  std::to_string(kp));
          if (ext) {
            e_.extensions.push_back({n->id, k, kp, w});
            objective_[w] += prm_.lambda_t * sc_.dt * (kp - (k + n->window.b));
          }
          int z2 = enc(n->kids[1], kp);
          p().add_constraint({{w, 1.0}, {z2, -1.0}}, Sense::Le, 0.0,
                             TraceRecord{n->id, kp, link_kind, true});
          for (int kpp = k; kpp <= kp; ++kpp) {
            int z1 = enc(n->kids[0], kpp);
            p().add_constraint({{w, 1.0}, {z1, -1.0}}, Sense::Le, 0.0,
                               TraceRecord{n->id, kpp, link_kind, true});
          }
          row.emplace_back(w, -1.0);
        }
        p().add_constraint(std::move(row), Sense::Le, 0.0,
                           TraceRecord{n->id, k, TraceKind::OrLink, true});
        break;
      }
    }
    e_.z_of[key] = z;
    return z;
  }

  void make_objective() {
    objective_[e_.gamma_var] += -1.0;
    for (int k = 0; k < H_; ++k) {
      for (int j = 0; j < d_; ++j) {
        if (prm_.lambda_u != 0.0) {
          objective_[e_.ctrl_pos[k][j]] += prm_.lambda_u;
          objective_[e_.ctrl_neg[k][j]] += prm_.lambda_u;
        }
      }
    }
    p().set_objective(objective_);
  }

  const stl::Formula& f_;
  const world::Scenario& sc_;
  EncodeParams prm_;
  const std::map<int, RepairMode>& decisions_;
  std::set<int> pred_relaxed_;
  std::set<int> temporal_relaxed_;
  std::map<int, double> objective_;
  EncodedProblem e_;
  double M_ = 0.0;
  int H_ = 0, d_ = 0;
};

}  // namespace

EncodedProblem encode(const stl::Formula& f, const world::Scenario& sc,
                      const EncodeParams& params) {
  static const std::map<int, RepairMode> kNoDecisions;
  return Encoder(f, sc, params, kNoDecisions).run();
}

EncodedProblem encode_with_relaxation(const stl::Formula& f, const world::Scenario& sc,
                                      const EncodeParams& params,
                                      const std::map<int, RepairMode>& decisions) {
  return Encoder(f, sc, params, decisions).run();
}

stl::Trajectory decode_trajectory(const EncodedProblem& e, const std::vector<double>& x) {
  stl::Trajectory tr;
  tr.dt = e.dt;
  tr.states.reserve(e.horizon + 1);
  for (int k = 0; k <= e.horizon; ++k) {
    Eigen::VectorXd s(2 * e.dims);
    for (int j = 0; j < 2 * e.dims; ++j) s[j] = x[e.state_vars[k][j]];
    tr.states.push_back(std::move(s));
  }
  tr.controls.reserve(e.horizon);
  for (int k = 0; k < e.horizon; ++k) {
    Eigen::VectorXd u(e.dims);
    for (int j = 0; j < e.dims; ++j) u[j] = x[e.ctrl_pos[k][j]] - x[e.ctrl_neg[k][j]];
    tr.controls.push_back(std::move(u));
  }
  return tr;
}

}  // namespace stlnav::encode
