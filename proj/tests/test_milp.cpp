#include <doctest.h>

#include <limits>
#include "stlnav/errors.hpp"
#include "stlnav/milp/problem.hpp"

using namespace stlnav;
using milp::MilpProblem;
using milp::Sense;
using milp::VarKind;

TEST_CASE("builder: variables and constraints") {
  MilpProblem p;
  int z = p.add_var(VarKind::Binary, 0, 1, "z");
  CHECK(p.vars()[z].kind == VarKind::Binary);
  CHECK_THROWS_AS(p.add_var(VarKind::Binary, 0, 2, "bad"), InvariantViolation);
  CHECK_THROWS_AS(p.add_constraint({{z + 5, 1.0}}, Sense::Le, 1.0), UnknownVar);
  CHECK_THROWS_AS(p.add_constraint({{z, 0.0}}, Sense::Le, 1.0), InvariantViolation);
  CHECK_THROWS_AS(p.set_objective({{17, 1.0}}), UnknownVar);
  int c = p.add_constraint({{z, 1.0}}, Sense::Le, 0.5);
  CHECK(c == 0);
  CHECK(p.constraints()[0].rhs == 0.5);
}

TEST_CASE("lp_relaxation: binaries become continuous") {
  MilpProblem p;
  for (int i = 0; i < 3; ++i) p.add_var(VarKind::Binary, 0, 1, "z" + std::to_string(i));
  p.add_var(VarKind::Continuous, -1, 1, "x");
  p.add_constraint({{0, 1.0}, {3, 1.0}}, Sense::Le, 1.0);
  p.set_objective({{0, -1.0}});
  auto q = milp::lp_relaxation(p);
  CHECK(q.num_binaries() == 0);
  CHECK(q.vars().size() == p.vars().size());
  CHECK(q.constraints().size() == p.constraints().size());
  CHECK(q.vars()[0].lo == 0.0);
  CHECK(q.vars()[0].hi == 1.0);
  // relaxing an already-continuous problem is the identity
  auto qq = milp::lp_relaxation(q);
  CHECK(milp::to_lp_format(qq) == milp::to_lp_format(q));
}

TEST_CASE("determinism: same build, same text") {
  auto build = [] {
    MilpProblem p;
    int a = p.add_var(VarKind::Binary, 0, 1, "a");
    int b = p.add_var(VarKind::Continuous, 0, 10, "b");
    p.add_constraint({{a, 2.0}, {b, -1.0}}, Sense::Ge, -3.0,
                     milp::TraceRecord{4, 2, milp::TraceKind::OrLink, true});
    p.set_objective({{b, 1.0}});
    return p;
  };
  CHECK(milp::to_lp_format(build()) == milp::to_lp_format(build()));
  CHECK(milp::trace_map_json(build()) == milp::trace_map_json(build()));
}

TEST_CASE("lp export covers bounds, binaries and senses") {
  MilpProblem p;
  p.add_var(VarKind::Binary, 0, 1, "z");
  p.add_var(VarKind::Continuous, -std::numeric_limits<double>::infinity(), 5, "x");
  p.add_constraint({{0, 1.0}, {1, 0.5}}, Sense::Eq, 2.0);
  p.set_objective({{1, -0.25}});
  std::string lp = milp::to_lp_format(p);
  CHECK(lp.find("Minimize") != std::string::npos);
  CHECK(lp.find("= 2") != std::string::npos);
  CHECK(lp.find("-inf <= x1 <= 5") != std::string::npos);
  CHECK(lp.find("Binaries") != std::string::npos);
  CHECK(lp.find("End") != std::string::npos);
}

TEST_CASE("trace json maps constraint ids") {
  MilpProblem p;
  p.add_var(VarKind::Binary, 0, 1, "z");
  p.add_constraint({{0, 1.0}}, Sense::Le, 1.0,
                   milp::TraceRecord{7, 3, milp::TraceKind::PredicateLb, true});
  p.add_constraint({{0, 1.0}}, Sense::Ge, 0.0);  // untraced
  std::string j = milp::trace_map_json(p);
  CHECK(j.find("\"0\"") != std::string::npos);
  CHECK(j.find("\"node\": 7") != std::string::npos);
  CHECK(j.find("predicate-lb") != std::string::npos);
  CHECK(j.find("\"1\"") == std::string::npos);
}
