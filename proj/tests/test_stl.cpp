#include <doctest.h>

#include "stlnav/errors.hpp"
#include "stlnav/stl/lexer.hpp"
#include "stlnav/stl/nnf.hpp"
#include "stlnav/stl/parser.hpp"
#include "stlnav/stl/printer.hpp"
#include "stlnav/stl/semantics.hpp"
#include "testutil.hpp"

using namespace stlnav;
using stl::Formula;
using stl::NodeKind;

namespace {

stl::RegionTable table2(std::initializer_list<std::string> names) {
  stl::RegionTable t;
  t.dims = 2;
  for (const auto& n : names) t.names.insert(n);
  return t;
}

stl::Trajectory traj1d(std::initializer_list<double> px) {
  stl::Trajectory tr;
  for (double p : px) {
    Eigen::VectorXd x(2);
    x << p, 0.0;
    tr.states.push_back(x);
  }
  for (size_t i = 1; i < tr.states.size(); ++i) tr.controls.push_back(Eigen::VectorXd::Zero(1));
  return tr;
}

}  // namespace

TEST_CASE("parse: conjunction of temporal goals") {
  auto t = table2({"goal", "obs"});
  Formula f = stl::parse_stl("F[0,20] goal & G[0,40] !obs", t);
  REQUIRE(f->kind == NodeKind::And);
  REQUIRE(f->kids.size() == 2);
  CHECK(f->kids[0]->kind == NodeKind::Eventually);
  CHECK(f->kids[0]->window.a == 0);
  CHECK(f->kids[0]->window.b == 20);
  CHECK(f->kids[1]->kind == NodeKind::Always);
  CHECK(f->kids[1]->kids[0]->kind == NodeKind::Not);
}

TEST_CASE("parse: interval errors") {
  auto t = table2({"a"});
  CHECK_THROWS_AS(stl::parse_stl("G[5,3] a", t), BadInterval);
  CHECK_THROWS_AS(stl::parse_stl("F[-1,3] a", t), BadInterval);
}

TEST_CASE("parse: until with parenthesized left operand") {
  auto t = table2({"d", "k"});
  Formula f = stl::parse_stl("(!d) U[0,40] k", t);
  REQUIRE(f->kind == NodeKind::Until);
  CHECK(f->window.b == 40);
  CHECK(f->kids[0]->kind == NodeKind::Not);
  CHECK(f->kids[0]->kids[0]->region == "d");
  CHECK(f->kids[1]->region == "k");
}

TEST_CASE("parse: unknown region and syntax errors") {
  auto t = table2({"a"});
  CHECK_THROWS_AS(stl::parse_stl("F[0,5] b", t), UnknownRegion);
  CHECK_THROWS_AS(stl::parse_stl("F[0,5", t), SyntaxError);
  CHECK_THROWS_AS(stl::parse_stl("a &", t), SyntaxError);
  CHECK_THROWS_AS(stl::parse_stl("{0*px >= 1}", t), SyntaxError);
  CHECK_THROWS_AS(stl::parse_stl("{pz >= 1}", t), SyntaxError);  // 2-D table
}

TEST_CASE("parse: affine atoms normalize to g >= 0") {
  auto t = table2({});
  Formula f = stl::parse_stl("{2*px - py <= 3}", t);
  REQUIRE(f->kind == NodeKind::Atom);
  CHECK(f->pred.coeffs[0] == -2.0);
  CHECK(f->pred.coeffs[1] == 1.0);
  CHECK(f->pred.offset == 3.0);
  Formula g = stl::parse_stl("{vx >= -1.5}", t);
  CHECK(g->pred.coeffs[2] == 1.0);
  CHECK(g->pred.offset == 1.5);
}

TEST_CASE("canonical print: commutative sort") {
  auto t = table2({"a", "b", "t1", "t2"});
  CHECK(stl::print_canonical(stl::parse_stl("b & a", t)) == "a & b");
  CHECK(stl::print_canonical(stl::parse_stl("F[0,5] t2 | F[0,5] t1", t)) ==
        "F[0,5] t1 | F[0,5] t2");
  // flattening keeps duplicates
  CHECK(stl::print_canonical(stl::parse_stl("F[0,5] a & F[0,5] a", t)) ==
        "F[0,5] a & F[0,5] a");
  CHECK(stl::print_canonical(stl::parse_stl("(a & b) & a", t)) == "a & a & b");
  CHECK(stl::print_canonical(stl::parse_stl("G[0,2] (a | b)", t)) == "G[0,2] (a | b)");
}

TEST_CASE("canonical print: round-trip identity on random formulas") {
  std::mt19937 rng(7);
  testutil::GenOptions opt;
  opt.max_depth = 6;
  opt.allow_not = true;
  opt.regions = {"a", "b", "goal"};
  auto t = table2({"a", "b", "goal"});
  for (int i = 0; i < 1000; ++i) {
    Formula f = testutil::random_formula(rng, opt);
    std::string text = stl::print_canonical(f);
    Formula g = stl::parse_stl(text, t);
    CHECK(stl::print_canonical(g) == text);
  }
}

TEST_CASE("nnf: dualities and double negation") {
  auto t = table2({"p"});
  Formula f = stl::to_nnf(stl::parse_stl("!G[0,4] p", t));
  REQUIRE(f->kind == NodeKind::Eventually);
  CHECK(f->window.b == 4);
  CHECK(f->kids[0]->kind == NodeKind::Region);
  CHECK(f->kids[0]->complemented);

  Formula g = stl::parse_stl("!!p", t);
  Formula gn = stl::to_nnf(g);
  CHECK(gn->kind == NodeKind::Region);
  CHECK_FALSE(gn->complemented);

  CHECK(stl::print_canonical(stl::to_nnf(stl::parse_stl("!(p & F[0,2] p)", t))) ==
        "!p | G[0,2] !p");
}

TEST_CASE("nnf: negated affine atom gains strictness margin") {
  auto t = table2({});
  Formula f = stl::to_nnf(stl::parse_stl("!{px >= 5}", t));
  REQUIRE(f->kind == NodeKind::Atom);
  CHECK(f->pred.coeffs[0] == -1.0);
  CHECK(f->pred.offset == doctest::Approx(5.0 - stl::kStrictEps));
}

TEST_CASE("nnf: negation over until is rejected") {
  auto t = table2({"a", "b"});
  Formula f = stl::parse_stl("!(a U[0,4] b)", t);
  CHECK_THROWS_AS(stl::to_nnf(f), UnsupportedNegation);
}

TEST_CASE("nnf: ids preserved for kept nodes") {
  auto t = table2({"p", "q"});
  Formula f = stl::parse_stl("!G[0,3] (p & q)", t);
  Formula n = stl::to_nnf(f);
  // The G id survives on the rewritten F node, atom ids survive complemented.
  Formula g_node = f->kids[0];
  CHECK(n->id == g_node->id);
  CHECK(stl::max_node_id(n) <= stl::max_node_id(f));
}

TEST_CASE("eval: atomic sign and always window") {
  auto t = table2({});
  stl::RegionMap none;
  Formula atom = stl::parse_stl("{px >= 0}", t);
  auto tr = traj1d({3.0});
  CHECK(stl::eval_boolean(atom, tr, 0, none));
  CHECK(stl::eval_robustness(atom, tr, 0, none) == doctest::Approx(3.0));

  Formula g = stl::parse_stl("G[0,2] {px >= 1}", t);
  auto tr2 = traj1d({2.0, 3.0, 1.5});
  CHECK(stl::eval_boolean(g, tr2, 0, none));
  CHECK(stl::eval_robustness(g, tr2, 0, none) == doctest::Approx(0.5));
}

TEST_CASE("eval: until two-sided condition") {
  // a holds on steps {0,1,2}, b only at step 2: witness at k'=2.
  auto t = table2({});
  stl::RegionMap none;
  Formula f = stl::parse_stl("{px >= 1} U[0,2] {px >= 2}", t);
  auto tr = traj1d({1.5, 1.2, 2.5});
  CHECK(stl::eval_boolean(f, tr, 0, none));
  // b never true within the window: false.
  auto tr2 = traj1d({1.5, 1.2, 1.9});
  CHECK_FALSE(stl::eval_boolean(f, tr2, 0, none));
  // a broken before the witness: false.
  auto tr3 = traj1d({0.5, 1.2, 2.5});
  CHECK_FALSE(stl::eval_boolean(f, tr3, 0, none));
}

TEST_CASE("eval: out-of-horizon references are an error") {
  auto t = table2({});
  stl::RegionMap none;
  Formula f = stl::parse_stl("G[0,5] {px >= 0}", t);
  auto tr = traj1d({1, 1, 1});
  CHECK_THROWS_AS(stl::eval_boolean(f, tr, 0, none), HorizonExceeded);
  CHECK_THROWS_AS(stl::eval_robustness(f, tr, 0, none), HorizonExceeded);
}

TEST_CASE("eval: negation antisymmetry is exact") {
  std::mt19937 rng(11);
  testutil::GenOptions opt;
  opt.allow_not = true;
  opt.horizon = 8;
  opt.regions = {"goal", "t1", "obs"};
  auto sc = testutil::micro_scenario();
  auto regions = sc.region_map();
  stl::FormulaBuilder b;
  for (int i = 0; i < 200; ++i) {
    Formula f = testutil::random_formula(rng, opt);
    stl::FormulaBuilder nb(stl::max_node_id(f) + 1);
    Formula nf = nb.negate(f);
    auto tr = testutil::random_trajectory(rng, 2, 8);
    double rho = stl::eval_robustness(f, tr, 0, regions);
    double nrho = stl::eval_robustness(nf, tr, 0, regions);
    CHECK(nrho == -rho);
  }
}

TEST_CASE("eval: sign consistency of boolean and robust semantics") {
  std::mt19937 rng(13);
  testutil::GenOptions opt;
  opt.max_depth = 4;
  opt.horizon = 10;
  opt.regions = {"goal", "t1", "obs"};
  auto sc = testutil::micro_scenario();
  auto regions = sc.region_map();
  for (int i = 0; i < 300; ++i) {
    Formula f = stl::to_nnf(testutil::random_formula(rng, opt));
    auto tr = testutil::random_trajectory(rng, 2, 10);
    double rho = stl::eval_robustness(f, tr, 0, regions);
    bool sat = stl::eval_boolean(f, tr, 0, regions);
    if (rho > 1e-9) CHECK(sat);
    if (rho < -1e-9) CHECK_FALSE(sat);
  }
}

TEST_CASE("eval: monotone shift never decreases NNF robustness") {
  std::mt19937 rng(17);
  testutil::GenOptions opt;
  opt.max_depth = 4;
  opt.horizon = 8;
  opt.regions = {};  // raw affine atoms only, offsets shifted directly
  stl::RegionMap none;
  std::uniform_real_distribution<double> d(0.01, 2.0);
  for (int i = 0; i < 200; ++i) {
    Formula f = stl::to_nnf(testutil::random_formula(rng, opt));
    double delta = d(rng);
    std::function<Formula(const Formula&)> shift = [&](const Formula& n) -> Formula {
      auto m = std::make_shared<stl::Node>(*n);
      if (n->kind == NodeKind::Atom) m->pred.offset += delta;
      for (auto& k : m->kids) k = shift(k);
      return m;
    };
    Formula g = shift(f);
    auto tr = testutil::random_trajectory(rng, 2, 8);
    CHECK(stl::eval_robustness(g, tr, 0, none) >=
          stl::eval_robustness(f, tr, 0, none) - 1e-12);
  }
}

TEST_CASE("eval: until robustness equals brute-force max-min") {
  std::mt19937 rng(19);
  testutil::GenOptions opt;
  opt.max_depth = 2;
  opt.allow_until = false;
  opt.horizon = 3;
  opt.regions = {"goal", "obs"};
  auto sc = testutil::micro_scenario();
  auto regions = sc.region_map();
  std::uniform_int_distribution<int> ab(0, 3);
  for (int i = 0; i < 200; ++i) {
    stl::FormulaBuilder b;
    Formula lhs = testutil::random_formula(rng, b, opt, 1, 2);
    Formula rhs = testutil::random_formula(rng, b, opt, 1, 2);
    int a = ab(rng) / 2, bb = a + ab(rng);
    Formula u = b.until({a, bb}, lhs, rhs);
    int H = 8;
    auto tr = testutil::random_trajectory(rng, 2, H);
    if (bb + 3 > H) continue;
    // Independent oracle: per-step child robustness arrays, explicit max-min.
    std::vector<double> r1, r2;
    for (int k = 0; k <= bb; ++k) {
      r1.push_back(stl::eval_robustness(lhs, tr, k, regions));
      r2.push_back(stl::eval_robustness(rhs, tr, k, regions));
    }
    double best = -std::numeric_limits<double>::infinity();
    for (int kp = a; kp <= bb; ++kp) {
      double cand = r2[kp];
      for (int kpp = 0; kpp <= kp; ++kpp) cand = std::min(cand, r1[kpp]);
      best = std::max(best, cand);
    }
    CHECK(stl::eval_robustness(u, tr, 0, regions) == doctest::Approx(best));
    bool bool_oracle = false;
    for (int kp = a; kp <= bb && !bool_oracle; ++kp) {
      bool ok = stl::eval_boolean(rhs, tr, kp, regions);
      for (int kpp = 0; kpp <= kp && ok; ++kpp) ok = stl::eval_boolean(lhs, tr, kpp, regions);
      bool_oracle = ok;
    }
    CHECK(stl::eval_boolean(u, tr, 0, regions) == bool_oracle);
  }
}

TEST_CASE("exact_match") {
  auto t = table2({"a", "b"});
  CHECK(stl::exact_match("F[0,5] a & G[0,9] b", "G[0,9] b & F[0,5] a", t));
  CHECK_FALSE(stl::exact_match("F[0,5] a", "F[0,6] a", t));
  CHECK_FALSE(stl::exact_match("F[0,5", "F[0,5] a", t));
  CHECK_THROWS_AS(stl::exact_match("F[0,5] a", "F[0,5", t), InvalidReference);
}

TEST_CASE("lexer: loose mode tokenizes anything") {
  auto toks = stl::lex_tokens("F[0,5] goal ???");
  REQUIRE(toks.size() >= 7);
  CHECK(toks[0] == "F");
  CHECK(toks[6] == "goal");
  CHECK_THROWS_AS(stl::lex("F[0,5] goal ?"), SyntaxError);
}
