// Deterministic scoring: CoT format/length rewards, STL syntax reward,
// BLEU-based correctness reward, total reward, group-relative advantage
// normalization, and the exact-match corpus accuracy metric.
#pragma once

#include <set>
#include <string>
#include <vector>

#include "stlnav/stl/parser.hpp"

namespace stlnav::rewards {

struct RewardConfig {
  double k1 = 1.0;    // both tag pairs present
  double k2 = 0.25;   // exactly one
  double k3 = -1.0;   // neither
  double k4 = 0.001;  // per CoT token, capped
  double k5 = 1.0;    // syntax validity (+/-)
  double k6 = 2.0;    // BLEU weight
  int l_max = 512;
  int bleu_n = 4;
  std::vector<double> bleu_weights;  // empty selects uniform 1/N
  std::set<std::string> vocab;       // allowed predicate identifiers
};

// Character span of well-formed <tag>...</tag> content, or npos pair.
struct TagSpan {
  size_t outer_begin = std::string::npos;
  size_t inner_begin = std::string::npos;
  size_t inner_end = std::string::npos;
  size_t outer_end = std::string::npos;
  bool ok() const { return outer_begin != std::string::npos; }
};

TagSpan find_tag_span(const std::string& text, const std::string& tag);

double reward_cot_format(const std::string& text, const RewardConfig& cfg);
double reward_cot_length(const std::string& text, const RewardConfig& cfg);
double reward_stl_syntax(const std::string& text, const RewardConfig& cfg);

// BP * exp(sum w_n log p_n) with clipped n-gram precisions; orders with no
// n-grams on either side are skipped, any computable order with zero matches
// zeroes the score (no smoothing).
double bleu(const std::vector<std::string>& hyp_tokens, const std::vector<std::string>& ref_tokens,
            int max_order, const std::vector<double>& weights);

double reward_bleu(const std::string& hyp_text, const std::string& ref_stl,
                   const RewardConfig& cfg);

double total_reward(const std::string& text, const std::string& ref_stl, const RewardConfig& cfg);

// (R_i - mean) / (population std + eps), shared across all tokens of sample i.
std::vector<double> group_advantages(const std::vector<double>& rewards, double eps = 1e-8);

double corpus_accuracy(const std::vector<std::pair<std::string, std::string>>& pairs,
                       const stl::RegionTable& table);

}  // namespace stlnav::rewards
