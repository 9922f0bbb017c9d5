#include "stlnav/rewards/rewards.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "stlnav/errors.hpp"
#include "stlnav/stl/lexer.hpp"
#include "stlnav/stl/printer.hpp"

namespace stlnav::rewards {

TagSpan find_tag_span(const std::string& text, const std::string& tag) {
  TagSpan s;
  std::string open = "<" + tag + ">";
  std::string close = "</" + tag + ">";
  size_t ob = text.find(open);
  if (ob == std::string::npos) return s;
  size_t cb = text.find(close, ob + open.size());
  if (cb == std::string::npos) return s;
  s.outer_begin = ob;
  s.inner_begin = ob + open.size();
  s.inner_end = cb;
  s.outer_end = cb + close.size();
  return s;
}

namespace {

// Both spans must be properly paired and non-overlapping to count; when they
// intersect, the later-starting one is discarded.
std::pair<TagSpan, TagSpan> spans_of(const std::string& text) {
  TagSpan think = find_tag_span(text, "think");
  TagSpan answer = find_tag_span(text, "answer");
  if (think.ok() && answer.ok()) {
    bool overlap = think.outer_begin < answer.outer_end && answer.outer_begin < think.outer_end;
    if (overlap) {
      if (think.outer_begin <= answer.outer_begin)
        answer = TagSpan{};
      else
        think = TagSpan{};
    }
  }
  return {think, answer};
}

std::string answer_text(const std::string& text) {
  TagSpan a = spans_of(text).second;
  if (!a.ok()) return text;
  return text.substr(a.inner_begin, a.inner_end - a.inner_begin);
}

int whitespace_tokens(const std::string& text) {
  std::istringstream is(text);
  std::string tok;
  int n = 0;
  while (is >> tok) ++n;
  return n;
}

}  // namespace

double reward_cot_format(const std::string& text, const RewardConfig& cfg) {
  auto [think, answer] = spans_of(text);
  int count = (think.ok() ? 1 : 0) + (answer.ok() ? 1 : 0);
  return count == 2 ? cfg.k1 : count == 1 ? cfg.k2 : cfg.k3;
}

double reward_cot_length(const std::string& text, const RewardConfig& cfg) {
  TagSpan think = spans_of(text).first;
  if (!think.ok()) return 0.0;
  int len = whitespace_tokens(text.substr(think.inner_begin, think.inner_end - think.inner_begin));
  return cfg.k4 * std::min(len, cfg.l_max);
}

double reward_stl_syntax(const std::string& text, const RewardConfig& cfg) {
  stl::RegionTable table;
  table.dims = 3;  // syntax validity is scenario-independent, all vars admissible
  table.names = cfg.vocab;
  try {
    stl::parse_stl(answer_text(text), table);
    return cfg.k5;
  } catch (const Error&) {
    return -cfg.k5;
  }
}

double bleu(const std::vector<std::string>& hyp_tokens, const std::vector<std::string>& ref_tokens,
            int max_order, const std::vector<double>& weights) {
  if (max_order < 1) throw Error("bleu needs max_order >= 1");
  const size_t c = hyp_tokens.size();
  const size_t r = ref_tokens.size();
  if (c == 0) return 0.0;

  auto ngram_counts = [](const std::vector<std::string>& toks, int n) {
    std::map<std::string, int> counts;
    if (static_cast<int>(toks.size()) < n) return counts;
    for (size_t i = 0; i + n <= toks.size(); ++i) {
      std::string key;
      for (int j = 0; j < n; ++j) key += toks[i + j] + "\x1f";
      ++counts[key];
    }
    return counts;
  };

  double log_sum = 0.0;
  for (int n = 1; n <= max_order; ++n) {
    auto hyp = ngram_counts(hyp_tokens, n);
    auto ref = ngram_counts(ref_tokens, n);
    long total = 0, correct = 0;
    for (const auto& [key, cnt] : hyp) {
      total += cnt;
      auto it = ref.find(key);
      if (it != ref.end()) correct += std::min(cnt, it->second);
    }
    if (total == 0) continue;  // order longer than the sequences, skip
    if (correct == 0) return 0.0;
    double w = n - 1 < static_cast<int>(weights.size()) ? weights[n - 1] : 1.0 / max_order;
    log_sum += w * std::log(static_cast<double>(correct) / total);
  }
  double bp = c > r ? 1.0 : std::exp(1.0 - static_cast<double>(r) / c);
  return bp * std::exp(log_sum);
}

double reward_bleu(const std::string& hyp_text, const std::string& ref_stl,
                   const RewardConfig& cfg) {
  auto hyp = stl::lex_tokens(answer_text(hyp_text));
  auto ref = stl::lex_tokens(ref_stl);
  if (hyp.empty()) return 0.0;
  return cfg.k6 * bleu(hyp, ref, cfg.bleu_n, cfg.bleu_weights);
}

double total_reward(const std::string& text, const std::string& ref_stl,
                    const RewardConfig& cfg) {
  return reward_cot_format(text, cfg) + reward_cot_length(text, cfg) +
         reward_stl_syntax(text, cfg) + reward_bleu(text, ref_stl, cfg);
}

std::vector<double> group_advantages(const std::vector<double>& rewards, double eps) {
  const size_t g = rewards.size();
  if (g < 2) throw GroupTooSmall();
  double mean = 0.0;
  for (double r : rewards) mean += r;
  mean /= g;
  double var = 0.0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  double std_pop = std::sqrt(var / g);
  std::vector<double> out(g);
  for (size_t i = 0; i < g; ++i) out[i] = (rewards[i] - mean) / (std_pop + eps);
  return out;
}

double corpus_accuracy(const std::vector<std::pair<std::string, std::string>>& pairs,
                       const stl::RegionTable& table) {
  if (pairs.empty()) return 0.0;
  int match = 0;
  for (size_t i = 0; i < pairs.size(); ++i) {
    try {
      if (stl::exact_match(pairs[i].first, pairs[i].second, table)) ++match;
    } catch (const InvalidReference& e) {
      throw InvalidReference("pair " + std::to_string(i) + ": " + e.what());
    }
  }
  return static_cast<double>(match) / pairs.size();
}

}  // namespace stlnav::rewards
