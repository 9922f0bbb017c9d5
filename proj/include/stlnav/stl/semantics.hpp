// Boolean and quantitative (robust) STL semantics over discrete trajectories.
#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "stlnav/stl/ast.hpp"

namespace stlnav::stl {

// Axis-aligned position box; the geometric meaning of a region name.
struct BoxRegion {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

using RegionMap = std::map<std::string, BoxRegion>;

struct Trajectory {
  std::vector<Eigen::VectorXd> states;    // x_0 .. x_H
  std::vector<Eigen::VectorXd> controls;  // u_0 .. u_{H-1}
  double dt = 1.0;

  int horizon() const { return static_cast<int>(states.size()) - 1; }
};

bool eval_boolean(const Formula& f, const Trajectory& tr, int k, const RegionMap& regions);

double eval_robustness(const Formula& f, const Trajectory& tr, int k, const RegionMap& regions);

// Membership margin of a position inside a box: min over face margins.
double box_margin(const BoxRegion& box, const Eigen::VectorXd& position);

}  // namespace stlnav::stl
