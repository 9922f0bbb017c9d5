#include "stlnav/solver/simplex.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "stlnav/errors.hpp"

namespace stlnav::solver {

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::Unbounded: return "Unbounded";
    case SolveStatus::IterLimit: return "IterLimit";
  }
  return "?";
}

namespace detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivTol = 1e-9;
constexpr double kCostTol = 1e-9;
constexpr double kDegenEps = 1e-10;
constexpr int kBlandTrigger = 80;
constexpr int kRefactorEvery = 1500;
constexpr int kActivationBatch = 512;

double row_activity(const CompiledRow& row, const std::vector<double>& x) {
  double a = 0.0;
  for (const auto& [v, c] : row.terms) a += c * x[v];
  return a;
}

double scaled_violation(const CompiledRow& row, double activity) {
  double v = 0.0;
  switch (row.sense) {
    case milp::Sense::Le: v = activity - row.rhs; break;
    case milp::Sense::Ge: v = row.rhs - activity; break;
    case milp::Sense::Eq: v = std::abs(activity - row.rhs); break;
  }
  return v / row.scale;
}

}  // namespace

// Persistent bounded-variable primal simplex. The basis, its inverse and the
// activated row set survive across solves; branching bound changes and row
// enable/disable masks (free slack = disabled row) are repaired in place by a
// composite phase 1, so repeated solves cost a handful of pivots.
class LpEngine {
  enum VState : std::uint8_t { kBasic, kAtLower, kAtUpper, kFreeFixed };

 public:
  LpEngine(const Compiled& c, const SolverParams& p) : c_(c), p_(p) {
    local_of_.assign(c_.rows.size(), -1);
  }

  LpOutcome solve(const std::vector<double>& lo, const std::vector<double>& hi,
                  const std::vector<std::uint8_t>* rows_enabled, bool zero_objective,
                  bool want_duals, long iter_budget) {
    zero_objective_ = zero_objective;
    iters_used_ = 0;
    iter_budget_ = iter_budget;

    if (!valid_) bootstrap();
    apply_structural_bounds(lo, hi);
    apply_row_mask(rows_enabled);
    refresh_nonbasics();
    recompute_basics();

    LpOutcome out;
    for (int round = 0; round < 100000; ++round) {
      SolveStatus s = repair_feasibility();
      if (s == SolveStatus::IterLimit) {
        out.status = s;
        out.iters = iters_used_;
        return out;
      }
      if (s == SolveStatus::Infeasible) {
        out.status = s;
        out.iters = iters_used_;
        return out;
      }
      s = optimize();
      if (s == SolveStatus::IterLimit) {
        out.status = s;
        out.iters = iters_used_;
        return out;
      }
      if (s == SolveStatus::Unbounded) {
        // Activate enabled rows that block the improving ray, else unbounded.
        if (!activate_ray_blockers()) {
          out.status = SolveStatus::Unbounded;
          out.iters = iters_used_;
          return out;
        }
        continue;
      }
      // Optimal on the active subset: pull in any violated inactive rows.
      if (!activate_violated()) break;
    }

    out.status = SolveStatus::Optimal;
    out.x = current_x();
    out.obj = 0.0;
    if (!zero_objective_)
      for (int j = 0; j < c_.n; ++j) out.obj += c_.cost[j] * out.x[j];
    if (want_duals) fill_duals(out);
    out.iters = iters_used_;
    return out;
  }

 private:
  double cost_of(int v) const {
    return (zero_objective_ || v >= c_.n) ? 0.0 : c_.cost[v];
  }

  int slack_of(int local_row) const { return c_.n + local_row; }

  // --- columns (variable v over local rows) ---

  template <typename Fn>
  void for_column(int v, Fn&& fn) const {
    if (v < c_.n) {
      for (const auto& [gr, a] : c_.cols[v]) {
        int lr = local_of_[gr];
        if (lr >= 0) fn(lr, a);
      }
    } else {
      fn(v - c_.n, 1.0);
    }
  }

  // FTRAN via sparse column: w = Binv * A_v.
  void ftran(int v, Eigen::VectorXd& w) const {
    w.setZero(m_);
    for_column(v, [&](int r, double a) { w += a * Binv_.col(r).head(m_); });
  }

  double dot_y_col(const Eigen::VectorXd& y, int v) const {
    double d = 0.0;
    for_column(v, [&](int r, double a) { d += y[r] * a; });
    return d;
  }

  // --- lifecycle ---

  void bootstrap() {
    m_ = 0;
    active_.clear();
    std::fill(local_of_.begin(), local_of_.end(), -1);
    vlo_.assign(c_.n, 0.0);
    vhi_.assign(c_.n, 0.0);
    state_.assign(c_.n, kAtLower);
    vval_.assign(c_.n, 0.0);
    basis_.clear();
    basis_pos_.assign(c_.n, -1);
    cap_ = 64;
    Binv_.resize(cap_, cap_);
    xB_.resize(cap_);
    enabled_.assign(c_.rows.size(), 1);
    // Equality rows essentially always bind; activate them up front.
    std::vector<int> eq;
    for (size_t r = 0; r < c_.rows.size(); ++r)
      if (c_.rows[r].sense == milp::Sense::Eq) eq.push_back(static_cast<int>(r));
    add_rows(eq);
    valid_ = true;
  }

  void apply_structural_bounds(const std::vector<double>& lo, const std::vector<double>& hi) {
    for (int j = 0; j < c_.n; ++j) {
      vlo_[j] = lo[j];
      vhi_[j] = hi[j];
    }
  }

  void apply_row_mask(const std::vector<std::uint8_t>* rows_enabled) {
    for (size_t r = 0; r < c_.rows.size(); ++r) {
      std::uint8_t en = rows_enabled ? (*rows_enabled)[r] : 1;
      enabled_[r] = en;
      int lr = local_of_[r];
      if (lr < 0) continue;
      set_slack_bounds(lr, en);
    }
  }

  void set_slack_bounds(int lr, bool en) {
    int s = slack_of(lr);
    if (!en) {
      vlo_[s] = -kInf;
      vhi_[s] = kInf;
      return;
    }
    switch (c_.rows[active_[lr]].sense) {
      case milp::Sense::Le: vlo_[s] = 0.0; vhi_[s] = kInf; break;
      case milp::Sense::Ge: vlo_[s] = -kInf; vhi_[s] = 0.0; break;
      case milp::Sense::Eq: vlo_[s] = 0.0; vhi_[s] = 0.0; break;
    }
  }

  // Nonbasic variables must sit at a bound (or stay put when free).
  void refresh_nonbasics() {
    int total = c_.n + m_;
    for (int j = 0; j < total; ++j) {
      if (state_[j] == kBasic) continue;
      bool lo_fin = std::isfinite(vlo_[j]), hi_fin = std::isfinite(vhi_[j]);
      if (!lo_fin && !hi_fin) {
        state_[j] = kFreeFixed;  // keeps its current pinned value
        continue;
      }
      if (state_[j] == kAtLower && lo_fin) {
        vval_[j] = vlo_[j];
      } else if (state_[j] == kAtUpper && hi_fin) {
        vval_[j] = vhi_[j];
      } else if (state_[j] == kFreeFixed || (state_[j] == kAtLower && !lo_fin) ||
                 (state_[j] == kAtUpper && !hi_fin)) {
        // choose the bound nearest the current value
        double v = vval_[j];
        if (lo_fin && (!hi_fin || std::abs(v - vlo_[j]) <= std::abs(v - vhi_[j]))) {
          state_[j] = kAtLower;
          vval_[j] = vlo_[j];
        } else {
          state_[j] = kAtUpper;
          vval_[j] = vhi_[j];
        }
      }
      // clamp into a possibly tightened box
      if (lo_fin && vval_[j] < vlo_[j]) {
        state_[j] = kAtLower;
        vval_[j] = vlo_[j];
      }
      if (hi_fin && vval_[j] > vhi_[j]) {
        state_[j] = kAtUpper;
        vval_[j] = vhi_[j];
      }
    }
  }

  void recompute_basics() {
    Eigen::VectorXd act = Eigen::VectorXd::Zero(m_);
    for (int j = 0; j < c_.n; ++j) {
      if (state_[j] == kBasic || vval_[j] == 0.0) continue;
      for (const auto& [gr, a] : c_.cols[j]) {
        int lr = local_of_[gr];
        if (lr >= 0) act[lr] += a * vval_[j];
      }
    }
    for (int i = 0; i < m_; ++i) {
      int s = slack_of(i);
      if (state_[s] != kBasic && vval_[s] != 0.0) act[i] += vval_[s];
    }
    Eigen::VectorXd rhs(m_);
    for (int i = 0; i < m_; ++i) rhs[i] = c_.rows[active_[i]].rhs;
    xB_.head(m_) = Binv_.topLeftCorner(m_, m_) * (rhs - act);
  }

  void ensure_capacity(int m) {
    if (m <= cap_) return;
    int nc = cap_;
    while (nc < m) nc = nc + nc / 2 + 16;
    Eigen::MatrixXd nb = Eigen::MatrixXd::Zero(nc, nc);
    nb.topLeftCorner(m_, m_) = Binv_.topLeftCorner(m_, m_);
    Binv_.swap(nb);
    Eigen::VectorXd nx(nc);
    nx.head(m_) = xB_.head(m_);
    xB_.swap(nx);
    cap_ = nc;
  }

  // Append rows with their slacks basic. With B' = [[B, 0], [R, I]] the new
  // inverse is [[Binv, 0], [-R Binv, I]].
  void add_rows(const std::vector<int>& rows) {
    if (rows.empty()) return;
    int old_m = m_;
    int add = static_cast<int>(rows.size());
    ensure_capacity(m_ + add);
    // map first so structural columns know the new local indices
    for (int i = 0; i < add; ++i) {
      local_of_[rows[i]] = old_m + i;
      active_.push_back(rows[i]);
    }
    m_ += add;
    int new_vars = c_.n + m_;
    vlo_.resize(new_vars);
    vhi_.resize(new_vars);
    state_.resize(new_vars);
    vval_.resize(new_vars, 0.0);
    basis_.resize(m_);
    basis_pos_.resize(new_vars, -1);
    // move slack entries for prior rows: slack ids shift, so rebuild maps
    // (slack id = n + local index; locals for old rows are unchanged)
    for (int i = 0; i < add; ++i) {
      int lr = old_m + i;
      int s = slack_of(lr);
      basis_[lr] = s;
      basis_pos_[s] = lr;
      state_[s] = kBasic;
      vval_[s] = 0.0;
      set_slack_bounds(lr, enabled_[rows[i]]);
    }
    Binv_.block(old_m, 0, add, cap_).setZero();
    Binv_.block(0, old_m, cap_, add).setZero();
    for (int i = 0; i < add; ++i) Binv_(old_m + i, old_m + i) = 1.0;
    // -R Binv over the old block, built from the sparse basic-variable terms
    for (int i = 0; i < add; ++i) {
      const auto& row = c_.rows[rows[i]];
      for (const auto& [v, a] : row.terms) {
        if (basis_pos_[v] >= 0 && basis_pos_[v] < old_m) {
          Binv_.row(old_m + i).head(old_m) -= a * Binv_.row(basis_pos_[v]).head(old_m);
        }
      }
    }
    recompute_basics();
  }

  void refactorize() {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m_, m_);
    for (int i = 0; i < m_; ++i) {
      int v = basis_[i];
      if (v < c_.n) {
        for (const auto& [gr, a] : c_.cols[v]) {
          int lr = local_of_[gr];
          if (lr >= 0) b(lr, i) = a;
        }
      } else {
        b(v - c_.n, i) = 1.0;
      }
    }
    Binv_.topLeftCorner(m_, m_) = b.partialPivLu().inverse();
    pivots_since_refactor_ = 0;
    recompute_basics();
  }

  std::vector<double> current_x() const {
    std::vector<double> x(c_.n);
    for (int j = 0; j < c_.n; ++j)
      x[j] = state_[j] == kBasic ? xB_[basis_pos_[j]] : vval_[j];
    return x;
  }

  void fill_duals(LpOutcome& out) const {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(m_);
    for (int i = 0; i < m_; ++i) {
      double cb = cost_of(basis_[i]);
      if (cb != 0.0) y += cb * Binv_.row(i).head(m_).transpose();
    }
    out.row_dual.assign(c_.rows.size(), 0.0);
    for (int i = 0; i < m_; ++i) out.row_dual[active_[i]] = y[i];
    out.reduced_cost.resize(c_.n);
    for (int j = 0; j < c_.n; ++j)
      out.reduced_cost[j] = state_[j] == kBasic ? 0.0 : cost_of(j) - dot_y_col(y, j);
  }

  // --- activation ---

  bool activate_violated() {
    std::vector<double> x = current_x();
    std::vector<std::pair<double, int>> violated;
    for (size_t r = 0; r < c_.rows.size(); ++r) {
      if (local_of_[r] >= 0 || !enabled_[r]) continue;
      double v = scaled_violation(c_.rows[r], row_activity(c_.rows[r], x));
      if (v > p_.feas_tol) violated.emplace_back(-v, static_cast<int>(r));
    }
    if (violated.empty()) return false;
    std::sort(violated.begin(), violated.end());
    std::vector<int> take;
    for (int i = 0; i < std::min<int>(kActivationBatch, violated.size()); ++i)
      take.push_back(violated[i].second);
    std::sort(take.begin(), take.end());
    add_rows(take);
    return true;
  }

  bool activate_ray_blockers() {
    std::vector<std::pair<double, int>> blocking;
    for (size_t r = 0; r < c_.rows.size(); ++r) {
      if (local_of_[r] >= 0 || !enabled_[r]) continue;
      double rate = 0.0;
      for (const auto& [v, a] : c_.rows[r].terms) rate += a * ray_[v];
      bool blocks = false;
      switch (c_.rows[r].sense) {
        case milp::Sense::Le: blocks = rate > 1e-9; break;
        case milp::Sense::Ge: blocks = rate < -1e-9; break;
        case milp::Sense::Eq: blocks = std::abs(rate) > 1e-9; break;
      }
      if (blocks) blocking.emplace_back(-std::abs(rate), static_cast<int>(r));
    }
    if (blocking.empty()) return false;
    std::sort(blocking.begin(), blocking.end());
    std::vector<int> take;
    for (int i = 0; i < std::min<int>(kActivationBatch, blocking.size()); ++i)
      take.push_back(blocking[i].second);
    std::sort(take.begin(), take.end());
    add_rows(take);
    return true;
  }

  // --- simplex phases ---

  double infeasibility_of(int i) const {
    int v = basis_[i];
    if (xB_[i] < vlo_[v] - feas_eps(v)) return vlo_[v] - xB_[i];
    if (xB_[i] > vhi_[v] + feas_eps(v)) return xB_[i] - vhi_[v];
    return 0.0;
  }

  double feas_eps(int v) const {
    (void)v;
    return 1e-9;
  }

  // Composite phase 1: minimize the total bound violation of basic variables.
  SolveStatus repair_feasibility() {
    Eigen::VectorXd w(cap_);
    int degen_streak = 0;
    bool bland = false;
    while (true) {
      // violated basics and the phase-1 gradient
      double total_inf = 0.0;
      Eigen::VectorXd y = Eigen::VectorXd::Zero(m_);
      int num_viol = 0;
      for (int i = 0; i < m_; ++i) {
        int v = basis_[i];
        if (xB_[i] < vlo_[v] - feas_eps(v)) {
          total_inf += vlo_[v] - xB_[i];
          y -= Binv_.row(i).head(m_).transpose();  // cost -1
          ++num_viol;
        } else if (xB_[i] > vhi_[v] + feas_eps(v)) {
          total_inf += xB_[i] - vhi_[v];
          y += Binv_.row(i).head(m_).transpose();  // cost +1
          ++num_viol;
        }
      }
      if (num_viol == 0) return SolveStatus::Optimal;
      if (iters_used_++ >= iter_budget_) return SolveStatus::IterLimit;

      // price nonbasics against the infeasibility gradient
      int q = -1, dir = 0;
      double best = 0.0;
      int total = c_.n + m_;
      for (int j = 0; j < total; ++j) {
        if (state_[j] == kBasic || vlo_[j] == vhi_[j]) continue;
        double d = -dot_y_col(y, j);
        int cand = 0;
        if ((state_[j] == kAtLower || state_[j] == kFreeFixed) && d < -kCostTol)
          cand = 1;
        else if ((state_[j] == kAtUpper || state_[j] == kFreeFixed) && d > kCostTol)
          cand = -1;
        if (!cand) continue;
        if (bland) {
          q = j;
          dir = cand;
          break;
        }
        if (std::abs(d) > best + 1e-15) {
          best = std::abs(d);
          q = j;
          dir = cand;
        }
      }
      if (q < 0) return SolveStatus::Infeasible;  // locally = globally minimal violation

      ftran(q, w);

      // ratio test with breakpoints where violated basics become feasible
      double theta = kInf;
      int leave = -1;
      int leave_to_lower = 0;
      if (std::isfinite(vhi_[q]) && std::isfinite(vlo_[q])) theta = vhi_[q] - vlo_[q];
      for (int i = 0; i < m_; ++i) {
        double delta = dir * w[i];
        if (std::abs(delta) <= kPivTol) continue;
        int bv = basis_[i];
        double t = kInf;
        int to_lower = 0;
        bool below = xB_[i] < vlo_[bv] - feas_eps(bv);
        bool above = xB_[i] > vhi_[bv] + feas_eps(bv);
        if (below) {
          // moving up blocks at lo (becomes feasible); moving down never blocks
          if (delta < 0) {
            t = (xB_[i] - vlo_[bv]) / delta;
            to_lower = 1;
          }
        } else if (above) {
          if (delta > 0) {
            t = (xB_[i] - vhi_[bv]) / delta;
            to_lower = 0;
          }
        } else if (delta > 0) {
          if (!std::isfinite(vlo_[bv])) continue;
          t = (xB_[i] - vlo_[bv]) / delta;
          to_lower = 1;
        } else {
          if (!std::isfinite(vhi_[bv])) continue;
          t = (xB_[i] - vhi_[bv]) / delta;
          to_lower = 0;
        }
        if (!std::isfinite(t)) continue;
        if (t < 0) t = 0;
        if (t < theta - 1e-12) {
          theta = t;
          leave = i;
          leave_to_lower = to_lower;
        } else if (leave >= 0 && std::abs(t - theta) <= 1e-12 && basis_[i] < basis_[leave]) {
          leave = i;
          leave_to_lower = to_lower;
        }
      }
      if (!std::isfinite(theta)) {
        // the violation can be pushed down forever only through numerical
        // trouble; treat as infeasible after a refactor retry
        if (pivots_since_refactor_ > 0) {
          refactorize();
          continue;
        }
        return SolveStatus::Infeasible;
      }

      if (theta <= kDegenEps) {
        if (++degen_streak >= kBlandTrigger) bland = true;
      } else {
        degen_streak = 0;
        bland = false;
      }
      apply_step(q, dir, theta, leave, leave_to_lower, w);
    }
  }

  // Phase 2 over a feasible basis.
  SolveStatus optimize() {
    Eigen::VectorXd w(cap_);
    int degen_streak = 0;
    bool bland = false;
    while (true) {
      if (iters_used_++ >= iter_budget_) return SolveStatus::IterLimit;
      Eigen::VectorXd y = Eigen::VectorXd::Zero(m_);
      for (int i = 0; i < m_; ++i) {
        double cb = cost_of(basis_[i]);
        if (cb != 0.0) y += cb * Binv_.row(i).head(m_).transpose();
      }
      int q = -1, dir = 0;
      double best = 0.0;
      int total = c_.n + m_;
      for (int j = 0; j < total; ++j) {
        if (state_[j] == kBasic || vlo_[j] == vhi_[j]) continue;
        double d = cost_of(j) - dot_y_col(y, j);
        int cand = 0;
        if ((state_[j] == kAtLower || state_[j] == kFreeFixed) && d < -kCostTol)
          cand = 1;
        else if ((state_[j] == kAtUpper || state_[j] == kFreeFixed) && d > kCostTol)
          cand = -1;
        if (!cand) continue;
        if (bland) {
          q = j;
          dir = cand;
          break;
        }
        if (std::abs(d) > best + 1e-15) {
          best = std::abs(d);
          q = j;
          dir = cand;
        }
      }
      if (q < 0) return SolveStatus::Optimal;

      ftran(q, w);
      double theta = kInf;
      int leave = -1;
      int leave_to_lower = 0;
      if (std::isfinite(vhi_[q]) && std::isfinite(vlo_[q])) theta = vhi_[q] - vlo_[q];
      for (int i = 0; i < m_; ++i) {
        double delta = dir * w[i];
        if (std::abs(delta) <= kPivTol) continue;
        int bv = basis_[i];
        double t;
        int to_lower;
        if (delta > 0) {
          if (!std::isfinite(vlo_[bv])) continue;
          t = (xB_[i] - vlo_[bv]) / delta;
          to_lower = 1;
        } else {
          if (!std::isfinite(vhi_[bv])) continue;
          t = (xB_[i] - vhi_[bv]) / delta;
          to_lower = 0;
        }
        if (t < 0) t = 0;
        if (t < theta - 1e-12) {
          theta = t;
          leave = i;
          leave_to_lower = to_lower;
        } else if (leave >= 0 && std::abs(t - theta) <= 1e-12 && basis_[i] < basis_[leave]) {
          leave = i;
          leave_to_lower = to_lower;
        }
      }
      if (!std::isfinite(theta)) {
        build_ray(q, dir, w);
        return SolveStatus::Unbounded;
      }
      if (theta <= kDegenEps) {
        if (++degen_streak >= kBlandTrigger) bland = true;
      } else {
        degen_streak = 0;
        bland = false;
      }
      apply_step(q, dir, theta, leave, leave_to_lower, w);
    }
  }

  void apply_step(int q, int dir, double theta, int leave, int leave_to_lower,
                  const Eigen::VectorXd& w) {
    double start = state_[q] == kBasic ? 0.0 : vval_[q];
    if (leave < 0) {
      // bound flip
      for (int i = 0; i < m_; ++i) xB_[i] -= theta * dir * w[i];
      state_[q] = dir > 0 ? kAtUpper : kAtLower;
      vval_[q] = dir > 0 ? vhi_[q] : vlo_[q];
      return;
    }
    int out = basis_[leave];
    for (int i = 0; i < m_; ++i) xB_[i] -= theta * dir * w[i];
    state_[out] = leave_to_lower ? kAtLower : kAtUpper;
    vval_[out] = leave_to_lower ? vlo_[out] : vhi_[out];
    if (!std::isfinite(vval_[out])) {  // disabled slack leaving: pin where it is
      state_[out] = kFreeFixed;
      vval_[out] = xB_[leave];
    }
    basis_pos_[out] = -1;
    basis_[leave] = q;
    basis_pos_[q] = leave;
    state_[q] = kBasic;
    xB_[leave] = start + dir * theta;

    double piv = w[leave];
    Eigen::RowVectorXd tmp = Binv_.row(leave).head(m_) / piv;
    for (int i = 0; i < m_; ++i) {
      if (i == leave) continue;
      double f = w[i];
      if (f != 0.0) Binv_.row(i).head(m_) -= f * tmp;
    }
    Binv_.row(leave).head(m_) = tmp;
    if (++pivots_since_refactor_ >= kRefactorEvery) refactorize();
  }

  void build_ray(int q, int dir, const Eigen::VectorXd& w) {
    ray_.assign(c_.n, 0.0);
    if (q < c_.n) ray_[q] = dir;
    for (int i = 0; i < m_; ++i) {
      int bv = basis_[i];
      if (bv < c_.n && std::abs(w[i]) > kPivTol) ray_[bv] = -dir * w[i];
    }
  }

  const Compiled& c_;
  SolverParams p_;
  bool valid_ = false;
  bool zero_objective_ = false;
  int m_ = 0;
  int cap_ = 0;
  long iters_used_ = 0;
  long iter_budget_ = 0;
  int pivots_since_refactor_ = 0;
  std::vector<int> active_;
  std::vector<int> local_of_;
  std::vector<double> vlo_, vhi_, vval_;
  std::vector<std::uint8_t> state_;
  std::vector<std::uint8_t> enabled_;
  std::vector<int> basis_, basis_pos_;
  Eigen::MatrixXd Binv_;
  Eigen::VectorXd xB_;
  std::vector<double> ray_;
};

Compiled Compiled::from(const milp::MilpProblem& p) {
  Compiled c;
  c.n = static_cast<int>(p.vars().size());
  c.lo.resize(c.n);
  c.hi.resize(c.n);
  c.cost.assign(c.n, 0.0);
  c.binary.assign(c.n, 0);
  c.cols.resize(c.n);
  for (const auto& v : p.vars()) {
    c.lo[v.id] = v.lo;
    c.hi[v.id] = v.hi;
    if (v.kind == milp::VarKind::Binary) {
      c.binary[v.id] = 1;
      c.binaries.push_back(v.id);
    }
  }
  for (const auto& [v, coef] : p.objective()) c.cost[v] = coef;
  c.rows.reserve(p.constraints().size());
  for (const auto& con : p.constraints()) {
    CompiledRow r;
    r.terms = con.terms;
    r.sense = con.sense;
    r.rhs = con.rhs;
    for (const auto& [v, coef] : r.terms) r.scale = std::max(r.scale, std::abs(coef));
    c.rows.push_back(std::move(r));
    int row_idx = static_cast<int>(c.rows.size()) - 1;
    for (const auto& [v, coef] : c.rows.back().terms)
      if (coef != 0.0) c.cols[v].emplace_back(row_idx, coef);
  }
  return c;
}

LazyLp::LazyLp(const Compiled& c, const SolverParams& p)
    : c_(c), p_(p), engine_(std::make_unique<LpEngine>(c, p)) {}

LazyLp::~LazyLp() = default;

LpOutcome LazyLp::solve(const std::vector<double>& lo, const std::vector<double>& hi,
                        const std::vector<std::uint8_t>* rows_enabled, bool zero_objective,
                        bool want_duals) {
  return engine_->solve(lo, hi, rows_enabled, zero_objective, want_duals, p_.max_lp_iters);
}

}  // namespace detail

SolveResult solve_lp(const milp::MilpProblem& p, const SolverParams& params) {
  if (p.num_binaries() > 0) throw Error("solve_lp requires a problem without binaries");
  auto t0 = std::chrono::steady_clock::now();
  detail::Compiled c = detail::Compiled::from(p);
  detail::LazyLp lp(c, params);
  detail::LpOutcome out = lp.solve(c.lo, c.hi, nullptr, false, true);
  SolveResult res;
  res.status = out.status;
  res.node_count = 0;
  if (out.status == SolveStatus::Optimal) {
    res.x = std::move(out.x);
    res.objective = out.obj;
    res.best_bound = out.obj;
    res.row_dual = std::move(out.row_dual);
    res.reduced_cost = std::move(out.reduced_cost);
  }
  res.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace stlnav::solver
