#include <doctest.h>

#include <cstdio>
#include <random>

#include "stlnav/errors.hpp"
#include "stlnav/world/scenario.hpp"
#include "testutil.hpp"

using namespace stlnav;

TEST_CASE("build_dynamics: block structure") {
  // 1-D with unit step: A = [[1,1],[0,1]], B = [[0.5],[1]]
  auto m = world::build_dynamics(1.0, 1);
  CHECK(m.A(0, 0) == 1.0);
  CHECK(m.A(0, 1) == 1.0);
  CHECK(m.A(1, 0) == 0.0);
  CHECK(m.A(1, 1) == 1.0);
  CHECK(m.B(0, 0) == 0.5);
  CHECK(m.B(1, 0) == 1.0);

  auto m2 = world::build_dynamics(0.5, 2);
  CHECK(m2.B.topRows(2) == 0.125 * Eigen::MatrixXd::Identity(2, 2));
  CHECK(m2.A.topRightCorner(2, 2) == 0.5 * Eigen::MatrixXd::Identity(2, 2));

  CHECK_THROWS_AS(world::build_dynamics(1.0, 4), BadDims);
  CHECK_THROWS_AS(world::build_dynamics(0.0, 2), InvariantViolation);
}

TEST_CASE("simulate: recurrence and linearity") {
  auto m = world::build_dynamics(1.0, 1);
  Eigen::VectorXd x0(2);
  x0 << 0, 0;
  std::vector<Eigen::VectorXd> u{Eigen::VectorXd::Constant(1, 1.0)};
  auto tr = world::simulate(m, x0, u);
  REQUIRE(tr.states.size() == 2);
  CHECK(tr.states[1][0] == doctest::Approx(0.5));
  CHECK(tr.states[1][1] == doctest::Approx(1.0));

  // zero controls from rest: constant position
  std::vector<Eigen::VectorXd> zeros(5, Eigen::VectorXd::Zero(1));
  auto tr0 = world::simulate(m, x0, zeros);
  for (const auto& s : tr0.states) CHECK(s[0] == 0.0);

  // superposition
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> d(-2, 2);
  auto m2 = world::build_dynamics(0.5, 2);
  auto rnd_x = [&] {
    Eigen::VectorXd x(4);
    for (int i = 0; i < 4; ++i) x[i] = d(rng);
    return x;
  };
  auto rnd_u = [&](int n) {
    std::vector<Eigen::VectorXd> us;
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd u1(2);
      u1 << d(rng), d(rng);
      us.push_back(u1);
    }
    return us;
  };
  auto xa = rnd_x(), xb = rnd_x();
  auto ua = rnd_u(6), ub = rnd_u(6);
  auto ta = world::simulate(m2, xa, ua);
  auto tb = world::simulate(m2, xb, ub);
  std::vector<Eigen::VectorXd> usum;
  for (int i = 0; i < 6; ++i) usum.push_back(ua[i] + ub[i]);
  auto tsum = world::simulate(m2, xa + xb, usum);
  for (int k = 0; k <= 6; ++k)
    CHECK((tsum.states[k] - ta.states[k] - tb.states[k]).cwiseAbs().maxCoeff() < 1e-12);

  // controls re-derived from the velocity recurrence match the input
  for (int k = 0; k < 6; ++k) {
    Eigen::VectorXd rec = (ta.states[k + 1].tail(2) - ta.states[k].tail(2)) / m2.dt;
    CHECK((rec - ua[k]).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("scenario: json round trip and validation") {
  auto sc = testutil::micro_scenario();
  sc.nl_instruction = "reach the goal";
  std::string path = "test_scenario_tmp.json";
  world::save_scenario(sc, path);
  auto sc2 = world::load_scenario(path);
  std::remove(path.c_str());
  CHECK(sc2.dims() == 2);
  CHECK(sc2.horizon == sc.horizon);
  CHECK(sc2.vmax == sc.vmax);
  CHECK(sc2.regions.size() == sc.regions.size());
  CHECK(sc2.regions[0].name == "goal");
  CHECK(sc2.regions[0].role == world::RegionRole::Goal);
  CHECK(sc2.nl_instruction == sc.nl_instruction);
  CHECK((sc2.x0 - sc.x0).cwiseAbs().maxCoeff() == 0.0);
  // identical text after a second round trip
  CHECK(world::scenario_to_json_text(sc2) == world::scenario_to_json_text(sc));
}

TEST_CASE("scenario: schema and invariant errors") {
  CHECK_THROWS_AS(world::scenario_from_json_text("{"), SchemaError);
  CHECK_THROWS_AS(world::scenario_from_json_text("{}"), SchemaError);
  auto sc = testutil::micro_scenario();
  sc.regions[0].lo[0] = sc.regions[0].hi[0] + 1;  // min > max
  CHECK_THROWS_AS(world::validate(sc), InvariantViolation);
  auto sc2 = testutil::micro_scenario();
  sc2.x0[0] = -5;  // outside workspace
  CHECK_THROWS_AS(world::validate(sc2), InvariantViolation);
  auto sc3 = testutil::micro_scenario();
  sc3.regions[1].hi[0] = 100;  // region outside workspace
  CHECK_THROWS_AS(world::validate(sc3), InvariantViolation);
}

TEST_CASE("membership and avoidance atoms") {
  world::Region r;
  r.name = "box";
  r.role = world::RegionRole::Target;
  r.lo = Eigen::Vector2d(0, 0);
  r.hi = Eigen::Vector2d(1, 1);

  auto atoms = world::membership_atoms(r);
  REQUIRE(atoms.size() == 4);
  Eigen::VectorXd inside(4);
  inside << 0.5, 0.5, 0, 0;
  for (const auto& a : atoms) CHECK(a.eval(inside) > 0);
  Eigen::VectorXd outside(4);
  outside << -0.5, 0.5, 0, 0;
  int neg = 0;
  for (const auto& a : atoms) neg += a.eval(outside) < 0;
  CHECK(neg == 1);

  stl::FormulaBuilder b;
  auto avoid = world::avoidance_formula(r, b);
  REQUIRE(avoid->kind == stl::NodeKind::Or);
  CHECK(avoid->kids.size() == 4);
  stl::Trajectory tr;
  tr.states.push_back(inside);
  stl::RegionMap none;
  CHECK_FALSE(stl::eval_boolean(avoid, tr, 0, none));
  tr.states[0] = outside;
  CHECK(stl::eval_boolean(avoid, tr, 0, none));
}

TEST_CASE("membership/avoidance complementarity off the faces") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> d(-3, 3);
  world::Region r;
  r.name = "box";
  r.role = world::RegionRole::Goal;
  r.lo = Eigen::Vector2d(-1, -1);
  r.hi = Eigen::Vector2d(1, 1);
  auto atoms = world::membership_atoms(r);
  stl::FormulaBuilder b;
  auto avoid = world::avoidance_formula(r, b);
  stl::RegionMap none;
  for (int i = 0; i < 500; ++i) {
    Eigen::VectorXd x(4);
    x << d(rng), d(rng), 0, 0;
    bool on_face = false;
    for (const auto& a : atoms) on_face = on_face || std::abs(a.eval(x)) < 1e-5;
    if (on_face) continue;
    bool member = true;
    for (const auto& a : atoms) member = member && a.eval(x) >= 0;
    stl::Trajectory tr;
    tr.states.push_back(x);
    CHECK(member != stl::eval_boolean(avoid, tr, 0, none));
  }
}
