// Discrete-time double-integrator UAV dynamics and forward simulation.
#pragma once

#include <Eigen/Dense>

#include "stlnav/stl/semantics.hpp"

namespace stlnav::world {

// x_{k+1} = A x_k + B u_k with block structure
//   A = [I  dt*I; 0  I],  B = [dt^2/2 * I; dt * I]
// over a state of stacked position and velocity.
struct DynamicsModel {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  double dt = 1.0;
  int dims = 2;

  int state_dim() const { return 2 * dims; }
};

DynamicsModel build_dynamics(double dt, int dims);

stl::Trajectory simulate(const DynamicsModel& model, const Eigen::VectorXd& x0,
                         const std::vector<Eigen::VectorXd>& controls);

}  // namespace stlnav::world
