#include "stlnav/world/dynamics.hpp"

#include "stlnav/errors.hpp"

namespace stlnav::world {

DynamicsModel build_dynamics(double dt, int dims) {
  if (dims < 1 || dims > 3) throw BadDims(dims);
  if (!(dt > 0.0)) throw InvariantViolation("dt must be positive");
  DynamicsModel m;
  m.dt = dt;
  m.dims = dims;
  const auto I = Eigen::MatrixXd::Identity(dims, dims);
  m.A = Eigen::MatrixXd::Zero(2 * dims, 2 * dims);
  m.A.topLeftCorner(dims, dims) = I;
  m.A.topRightCorner(dims, dims) = dt * I;
  m.A.bottomRightCorner(dims, dims) = I;
  m.B = Eigen::MatrixXd::Zero(2 * dims, dims);
  m.B.topRows(dims) = 0.5 * dt * dt * I;
  m.B.bottomRows(dims) = dt * I;
  return m;
}

stl::Trajectory simulate(const DynamicsModel& model, const Eigen::VectorXd& x0,
                         const std::vector<Eigen::VectorXd>& controls) {
  stl::Trajectory tr;
  tr.dt = model.dt;
  tr.controls = controls;
  tr.states.reserve(controls.size() + 1);
  tr.states.push_back(x0);
  for (const auto& u : controls) tr.states.push_back(model.A * tr.states.back() + model.B * u);
  return tr;
}

}  // namespace stlnav::world
