#include <doctest.h>

#include <random>
#include <algorithm>

#include "stlnav/errors.hpp"
#include "stlnav/rewards/rewards.hpp"
#include "stlnav/stl/lexer.hpp"

using namespace stlnav;
using rewards::RewardConfig;

namespace {

RewardConfig cfg_with_vocab() {
  RewardConfig cfg;
  cfg.vocab = {"goal", "a", "b", "t1", "t2"};
  return cfg;
}

}  // namespace

TEST_CASE("cot format reward: all three branches") {
  RewardConfig cfg;
  CHECK(rewards::reward_cot_format("<think>x</think><answer>y</answer>", cfg) == cfg.k1);
  CHECK(rewards::reward_cot_format("<answer>y</answer><think>x</think>", cfg) == cfg.k1);
  CHECK(rewards::reward_cot_format("<think>x</think>", cfg) == cfg.k2);
  CHECK(rewards::reward_cot_format("<answer>y</answer>", cfg) == cfg.k2);
  CHECK(rewards::reward_cot_format("plain text", cfg) == cfg.k3);
  // dangling or interleaved tags do not count as pairs
  CHECK(rewards::reward_cot_format("<think>x<answer>y</answer>", cfg) == cfg.k2);
  CHECK(rewards::reward_cot_format("<think>a<answer>b</think>c</answer>", cfg) == cfg.k2);
}

TEST_CASE("cot length reward: cap and missing span") {
  RewardConfig cfg;
  cfg.k4 = 0.01;
  cfg.l_max = 512;
  std::string ten = "<think>a b c d e f g h i j</think><answer>x</answer>";
  CHECK(rewards::reward_cot_length(ten, cfg) == doctest::Approx(0.10));
  std::string big = "<think>";
  for (int i = 0; i < 1000; ++i) big += "tok ";
  big += "</think>";
  CHECK(rewards::reward_cot_length(big, cfg) == doctest::Approx(0.01 * 512));
  CHECK(rewards::reward_cot_length("no tags App", cfg) == 0.0);
}

TEST_CASE("stl syntax reward: vocabulary and interval validity") {
  auto cfg = cfg_with_vocab();
  CHECK(rewards::reward_stl_syntax("<answer>F[0,5] goal</answer>", cfg) == cfg.k5);
  CHECK(rewards::reward_stl_syntax("<answer>F[0,5] gool</answer>", cfg) == -cfg.k5);
  CHECK(rewards::reward_stl_syntax("<answer>F[5,0] goal</answer>", cfg) == -cfg.k5);
  CHECK(rewards::reward_stl_syntax("<answer>F[0,5] goal &</answer>", cfg) == -cfg.k5);
  // the whole text is scored when no answer span exists
  CHECK(rewards::reward_stl_syntax("F[0,5] goal", cfg) == cfg.k5);
}

TEST_CASE("bleu: boundary values") {
  std::vector<double> w;  // uniform
  auto toks = [](const std::string& s) { return stl::lex_tokens(s); };
  CHECK(rewards::bleu(toks("F[0,5] goal"), toks("F[0,5] goal"), 4, w) == doctest::Approx(1.0));
  CHECK(rewards::bleu(toks("a"), toks("a"), 4, w) == doctest::Approx(1.0));
  CHECK(rewards::bleu(toks("a b c"), toks("x y z"), 4, w) == doctest::Approx(0.0));
  CHECK(rewards::bleu({}, toks("a"), 4, w) == doctest::Approx(0.0));
}

TEST_CASE("bleu: brevity penalty at order 1") {
  // hypothesis = reference minus its final token, len(ref) = 10:
  // p1 = 1 and BP = exp(1 - 10/9)
  std::vector<std::string> ref, hyp;
  for (int i = 0; i < 10; ++i) ref.push_back("t" + std::to_string(i));
  hyp.assign(ref.begin(), ref.end() - 1);
  double b = rewards::bleu(hyp, ref, 1, {1.0});
  CHECK(b == doctest::Approx(std::exp(1.0 - 10.0 / 9.0)).epsilon(1e-6));
  CHECK(b == doctest::Approx(0.894839).epsilon(1e-4));
}

TEST_CASE("bleu: clipping counts repeated tokens") {
  // "a a a" against "a": clipped unigram precision is 1/3
  double b = rewards::bleu({"a", "a", "a"}, {"a"}, 1, {1.0});
  CHECK(b == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("bleu: removing a matched token never raises unigram precision") {
  std::mt19937 rng(43);
  std::uniform_int_distribution<int> len(2, 10), tok(0, 4);
  for (int i = 0; i < 200; ++i) {
    std::vector<std::string> ref, hyp;
    for (int j = len(rng); j > 0; --j) ref.push_back("w" + std::to_string(tok(rng)));
    for (int j = len(rng); j > 0; --j) hyp.push_back("w" + std::to_string(tok(rng)));
    // drop a token whose every occurrence is inside the clip, so the removal
    // takes away a counted match
    auto count = [](const std::vector<std::string>& v, const std::string& w) {
      return std::count(v.begin(), v.end(), w);
    };
    size_t drop = hyp.size();
    for (size_t j = 0; j < hyp.size(); ++j) {
      if (count(ref, hyp[j]) >= count(hyp, hyp[j])) {
        drop = j;
        break;
      }
    }
    if (drop == hyp.size() || hyp.size() < 2) continue;
    std::vector<std::string> shorter = hyp;
    shorter.erase(shorter.begin() + drop);
    double bp1 = hyp.size() > ref.size() ? 1.0 : std::exp(1.0 - double(ref.size()) / hyp.size());
    double bp2 = shorter.size() > ref.size()
                     ? 1.0
                     : std::exp(1.0 - double(ref.size()) / shorter.size());
    double prec1 = rewards::bleu(hyp, ref, 1, {1.0}) / bp1;
    double prec2 = rewards::bleu(shorter, ref, 1, {1.0}) / bp2;
    CHECK(prec2 <= prec1 + 1e-9);
  }
}

TEST_CASE("reward_bleu and total_reward compose") {
  auto cfg = cfg_with_vocab();
  std::string perfect = "<think>map the goal phrase</think><answer>F[0,5] goal</answer>";
  double expected_total = cfg.k1 + cfg.k4 * 4 + cfg.k5 + cfg.k6 * 1.0;
  CHECK(rewards::reward_bleu(perfect, "F[0,5] goal", cfg) == doctest::Approx(cfg.k6));
  CHECK(rewards::total_reward(perfect, "F[0,5] goal", cfg) == doctest::Approx(expected_total));

  std::string garbage = "untagged garbage $$";
  double expected_garbage = cfg.k3 + 0.0 - cfg.k5 + cfg.k6 * 0.0;
  CHECK(rewards::total_reward(garbage, "F[0,5] goal", cfg) ==
        doctest::Approx(expected_garbage));

  CHECK(rewards::reward_bleu("<answer></answer>", "F[0,5] goal", cfg) == 0.0);

  // total equals the sum of its components on arbitrary inputs
  std::string mixed = "<think>x y</think><answer>F[0,5] gool | t1</answer>";
  double sum = rewards::reward_cot_format(mixed, cfg) + rewards::reward_cot_length(mixed, cfg) +
               rewards::reward_stl_syntax(mixed, cfg) +
               rewards::reward_bleu(mixed, "F[0,5] goal", cfg);
  CHECK(rewards::total_reward(mixed, "F[0,5] goal", cfg) == doctest::Approx(sum));
}

TEST_CASE("reward boundedness") {
  auto cfg = cfg_with_vocab();
  std::vector<std::string> samples = {
      "<think>a</think><answer>F[0,5] goal</answer>",
      "<think></think>",
      "junk",
      "<answer>F[0,9] goal</answer>",
  };
  double lo = cfg.k3 - cfg.k5;
  double hi = cfg.k1 + cfg.k4 * cfg.l_max + cfg.k5 + cfg.k6;
  for (const auto& s : samples) {
    double r = rewards::total_reward(s, "F[0,5] goal", cfg);
    CHECK(r >= lo - 1e-12);
    CHECK(r <= hi + 1e-12);
  }
}

TEST_CASE("group advantages: normalization and guards") {
  auto a = rewards::group_advantages({1.0, 2.0, 3.0});
  REQUIRE(a.size() == 3);
  CHECK(a[0] == doctest::Approx(-1.22474).epsilon(1e-5));
  CHECK(a[1] == doctest::Approx(0.0));
  CHECK(a[2] == doctest::Approx(1.22474).epsilon(1e-5));

  auto zeros = rewards::group_advantages({0.5, 0.5, 0.5, 0.5});
  for (double v : zeros) CHECK(v == 0.0);

  CHECK_THROWS_AS(rewards::group_advantages({1.0}), GroupTooSmall);

  std::mt19937 rng(47);
  std::uniform_real_distribution<double> d(-5, 5);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> r;
    for (int j = 0; j < 8; ++j) r.push_back(d(rng));
    auto adv = rewards::group_advantages(r);
    double mean = 0, var = 0;
    for (double v : adv) mean += v;
    mean /= adv.size();
    for (double v : adv) var += (v - mean) * (v - mean);
    var /= adv.size();
    CHECK(std::abs(mean) < 1e-9);
    CHECK(std::sqrt(var) == doctest::Approx(1.0).epsilon(1e-4));
    // shift invariance
    std::vector<double> shifted;
    for (double v : r) shifted.push_back(v + 17.5);
    auto adv2 = rewards::group_advantages(shifted);
    for (size_t j = 0; j < adv.size(); ++j) CHECK(adv2[j] == doctest::Approx(adv[j]));
  }
}

TEST_CASE("corpus accuracy") {
  stl::RegionTable t;
  t.dims = 2;
  t.names = {"a", "b"};
  std::vector<std::pair<std::string, std::string>> same(4, {"F[0,5] a", "F[0,5] a"});
  CHECK(rewards::corpus_accuracy(same, t) == doctest::Approx(1.0));

  std::vector<std::pair<std::string, std::string>> half = {
      {"F[0,5] a & G[0,2] b", "G[0,2] b & F[0,5] a"},  // canonical-equal
      {"F[0,5] a", "F[0,6] a"},
      {"not parseable ((", "F[0,5] a"},  // unparseable hypothesis counts as miss
      {"b & a", "a & b"},
  };
  CHECK(rewards::corpus_accuracy(half, t) == doctest::Approx(0.5));

  std::vector<std::pair<std::string, std::string>> badref = {{"F[0,5] a", "F[0,5"}};
  CHECK_THROWS_AS(rewards::corpus_accuracy(badref, t), InvalidReference);
}
