#include "signgram/infotheory.hpp"

#include <cmath>
#include <limits>

#include "signgram/error.hpp"

namespace signgram {

namespace {

void check_probabilities(double sum, bool negative) {
  if (negative) throw DataError("negative probability");
  if (std::abs(sum - 1.0) > 1e-9) throw DataError("probabilities do not sum to 1");
}

}  // namespace

double entropy(std::span<const double> probabilities) {
  double sum = 0.0;
  bool negative = false;
  for (double p : probabilities) {
    sum += p;
    negative |= p < 0.0;
  }
  check_probabilities(sum, negative);
  double h = 0.0;
  for (double p : probabilities) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

double mutual_information(const JointDistribution& joint) {
  double sum = 0.0;
  bool negative = false;
  std::map<TokenId, double> left;
  std::map<TokenId, double> right;
  for (const auto& [pair, p] : joint) {
    sum += p;
    negative |= p < 0.0;
    left[pair.first] += p;
    right[pair.second] += p;
  }
  check_probabilities(sum, negative);
  double mi = 0.0;
  for (const auto& [pair, p] : joint) {
    if (p > 0.0) mi += p * std::log2(p / (left[pair.first] * right[pair.second]));
  }
  return mi;
}

EntropyReport corpus_entropy_mi(const Corpus& corpus, const PairOptions& options) {
  EntropyReport report;
  std::map<TokenId, std::size_t> unigrams;
  std::map<std::pair<TokenId, TokenId>, std::size_t> pairs;
  const TokenId end = end_token(corpus.vocabulary_size);
  for (const Text& text : corpus.texts) {
    const auto signs = text.signs();
    std::vector<TokenId> seq;
    if (options.include_boundaries) seq.push_back(kStartToken);
    for (Sign s : signs) {
      seq.push_back(s.id);
      ++unigrams[s.id];
      ++report.token_count;
    }
    if (options.include_boundaries) seq.push_back(end);
    for (std::size_t i = 1; i < seq.size(); ++i) {
      ++pairs[{seq[i - 1], seq[i]}];
      ++report.pair_count;
    }
  }
  if (report.token_count == 0) throw DataError("entropy of an empty corpus");
  if (report.pair_count == 0) throw DataError("mutual information undefined: no adjacent sign pairs");

  std::vector<double> p;
  p.reserve(unigrams.size());
  for (const auto& [t, n] : unigrams)
    p.push_back(static_cast<double>(n) / static_cast<double>(report.token_count));
  report.entropy_bits = entropy(p);

  JointDistribution joint;
  for (const auto& [pair, n] : pairs)
    joint[pair] = static_cast<double>(n) / static_cast<double>(report.pair_count);
  report.mutual_information_bits = mutual_information(joint);
  return report;
}

PerplexityReport cross_entropy_perplexity(const NgramModel& model, const Corpus& held_out,
                                          const PerplexityOptions& options) {
  PerplexityReport report;
  report.order = model.config().order;
  const ScoreOptions score{.predict_end = options.include_end, .use_start = true};
  double log_prob = 0.0;
  std::size_t events = 0;
  for (const Text& text : held_out.texts) {
    log_prob += sequence_log_prob(model, text, score);
    events += text.size() + (options.include_end ? 1 : 0);
  }
  if (events == 0) throw DataError("empty held-out set");
  report.held_out_token_count = events;
  report.cross_entropy_bits_per_token = -log_prob / static_cast<double>(events);
  report.perplexity = std::exp2(report.cross_entropy_bits_per_token);
  return report;
}

std::vector<PerplexityReport> perplexity_sweep(const Corpus& train, const Corpus& held_out,
                                               const ModelConfig& base, std::span<const int> orders,
                                               const PerplexityOptions& options) {
  std::vector<PerplexityReport> out;
  out.reserve(orders.size());
  for (int n : orders) {
    ModelConfig config = base;
    config.order = n;
    out.push_back(cross_entropy_perplexity(NgramModel::train(train, config), held_out, options));
  }
  return out;
}

}  // namespace signgram
