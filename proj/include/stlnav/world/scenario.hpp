// Workspace, labeled regions with semantic roles, and scenario serialization.
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "stlnav/stl/ast.hpp"
#include "stlnav/stl/nnf.hpp"
#include "stlnav/stl/parser.hpp"
#include "stlnav/stl/semantics.hpp"
#include "stlnav/world/dynamics.hpp"

namespace stlnav::world {

enum class RegionRole { Goal, Target, Obstacle, Nofly, Gate, Auth, Search };

const char* role_name(RegionRole r);
RegionRole role_from_name(const std::string& s);

// Hard-safety roles are never eligible for relaxation.
inline bool is_safety_role(RegionRole r) {
  return r == RegionRole::Obstacle || r == RegionRole::Nofly;
}

struct Region {
  std::string name;
  RegionRole role = RegionRole::Goal;
  Eigen::VectorXd lo;  // position box corners, lo < hi componentwise
  Eigen::VectorXd hi;

  int dims() const { return static_cast<int>(lo.size()); }
};

struct Scenario {
  Eigen::VectorXd ws_lo;  // workspace position box
  Eigen::VectorXd ws_hi;
  double vmax = 5.0;
  double amax = 1.0;
  double dt = 1.0;
  int horizon = 1;
  Eigen::VectorXd x0;  // stacked position and velocity
  std::vector<Region> regions;
  std::optional<std::string> nl_instruction;

  int dims() const { return static_cast<int>(ws_lo.size()); }
  int state_dim() const { return 2 * dims(); }

  const Region* find_region(const std::string& name) const;
  stl::RegionTable region_table() const;
  stl::RegionMap region_map() const;
  DynamicsModel dynamics() const { return build_dynamics(dt, dims()); }
};

// Validates all scenario invariants; throws InvariantViolation.
void validate(const Scenario& sc);

Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& sc, const std::string& path);

Scenario scenario_from_json_text(const std::string& text);
std::string scenario_to_json_text(const Scenario& sc);

// 2*dims affine membership atoms whose conjunction is p in box.
std::vector<stl::AtomicPredicate> membership_atoms(const Region& r);

// Disjunction of strict complement face atoms: outside at least one face.
stl::Formula avoidance_formula(const Region& r, stl::FormulaBuilder& b,
                               double strict_eps = stl::kStrictEps);

// Complement face predicates used by both avoidance_formula and the encoder.
std::vector<stl::AtomicPredicate> complement_atoms(const Region& r, double strict_eps);

}  // namespace stlnav::world
