#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "signgram/corpus.hpp"

namespace signgram {

// Model token space: 0 is the start token <s>, 1..V are signs, V+1 is the end
// token </s>. <s> only ever appears in histories and </s> only as a follower,
// so a conditional distribution ranges over V+1 followers.
using TokenId = std::uint32_t;

inline constexpr TokenId kStartToken = 0;
inline constexpr int kMaxOrder = 5;
inline constexpr std::uint32_t kMaxVocabularySize = 65534;

constexpr TokenId end_token(std::uint32_t vocabulary_size) { return vocabulary_size + 1; }

enum class Smoothing { mle, add_one, witten_bell, katz };

std::string_view to_string(Smoothing s);
// Accepts "mle", "add_one"/"add-one", "witten_bell"/"witten-bell"/"wb", "katz".
Smoothing parse_smoothing(std::string_view name);

struct ModelConfig {
  int order = 2;
  Smoothing smoothing = Smoothing::witten_bell;
  std::uint32_t vocabulary_size = kDefaultVocabularySize;
  // Good-Turing discounting applies to counts r <= k.
  int katz_gt_threshold = 5;
  // Absolute discount used when the count-of-counts are too sparse for Good-Turing.
  double katz_fallback_discount = 0.5;

  // Throws DataError on out-of-range fields.
  void validate() const;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

// Follower counts of one history, followers sorted by token id.
struct HistoryCounts {
  std::uint64_t total = 0;
  std::vector<std::pair<TokenId, std::uint64_t>> followers;

  std::uint64_t count(TokenId follower) const;
  std::size_t types() const noexcept { return followers.size(); }

  friend bool operator==(const HistoryCounts&, const HistoryCounts&) = default;
};

// m-gram counts for every m <= order. A history of length m-1 indexes the
// order-m table. Every text contributes <s> s_1 .. s_N </s> with a single
// start token, so near the start only the shorter histories exist.
class NgramCounts {
 public:
  NgramCounts(int order, std::uint32_t vocabulary_size);

  int order() const noexcept { return order_; }
  std::uint32_t vocabulary_size() const noexcept { return vocabulary_size_; }

  void add_text(std::span<const Sign> signs);
  void add(std::span<const TokenId> history, TokenId follower, std::uint64_t n = 1);
  // Integer addition of another table with the same order and vocabulary.
  void merge(const NgramCounts& other);

  // nullptr when the history was never observed. history.size() < order().
  const HistoryCounts* find(std::span<const TokenId> history) const;
  std::uint64_t count(std::span<const TokenId> history, TokenId follower) const;

  // N_r for the order-m table: number of distinct m-grams seen exactly r times.
  std::map<std::uint64_t, std::uint64_t> count_of_counts(int m) const;

  std::size_t history_count(int m) const;
  // Histories of the order-m table in lexicographic token order.
  std::vector<std::pair<std::vector<TokenId>, const HistoryCounts*>> sorted_histories(int m) const;

  friend bool operator==(const NgramCounts&, const NgramCounts&) = default;

 private:
  std::uint64_t key(std::span<const TokenId> history) const;

  int order_;
  std::uint32_t vocabulary_size_;
  std::vector<std::unordered_map<std::uint64_t, HistoryCounts>> tables_;
};

// Throws DataError if any text is damaged.
NgramCounts count_ngrams(const Corpus& corpus, int order);

// P(follower | history) over the whole token space; probabilities[t] is the
// probability of token t, probabilities[0] (start) is always 0.
struct ConditionalDistribution {
  std::vector<TokenId> history;
  std::vector<double> probabilities;

  double operator[](TokenId follower) const { return probabilities.at(follower); }
  double sum() const;
};

// Stand-alone estimators over a count table. History length must be < order.
ConditionalDistribution mle_distribution(const NgramCounts& counts, std::span<const TokenId> history);
ConditionalDistribution add_one_distribution(const NgramCounts& counts, std::span<const TokenId> history);
ConditionalDistribution witten_bell_distribution(const NgramCounts& counts,
                                                 std::span<const TokenId> history);
ConditionalDistribution katz_distribution(const NgramCounts& counts, std::span<const TokenId> history,
                                          int gt_threshold = 5, double fallback_discount = 0.5);

// Discounted counts for Katz backoff on one order.
struct KatzDiscounts {
  int threshold = 5;
  bool absolute_fallback = false;
  double fallback_discount = 0.5;
  // good_turing[r] = r* for r in [1, threshold] (index 0 unused).
  std::vector<double> good_turing;

  double discounted(std::uint64_t r) const;
};

KatzDiscounts katz_discounts(const NgramCounts& counts, int m, int threshold, double fallback_discount);

class NgramModel {
 public:
  NgramModel(ModelConfig config, NgramCounts counts, std::string label = {});

  static NgramModel train(const Corpus& corpus, const ModelConfig& config);

  const ModelConfig& config() const noexcept { return config_; }
  const NgramCounts& counts() const noexcept { return counts_; }
  const std::string& label() const noexcept { return label_; }
  std::uint32_t vocabulary_size() const noexcept { return config_.vocabulary_size; }
  TokenId end() const noexcept { return end_token(config_.vocabulary_size); }
  bool smoothed() const noexcept { return config_.smoothing != Smoothing::mle; }

  // Conditional distribution given the preceding tokens; only the last
  // order-1 of them are used. An MLE model throws DataError for an unseen history.
  ConditionalDistribution distribution(std::span<const TokenId> history) const;
  double probability(std::span<const TokenId> history, TokenId follower) const;
  // MLE models cannot condition on unseen histories.
  bool defined_for(std::span<const TokenId> history) const;

 private:
  void fill(std::span<const TokenId> history, std::vector<double>& out) const;

  ModelConfig config_;
  NgramCounts counts_;
  std::string label_;
  std::vector<KatzDiscounts> katz_;  // indexed by order m
};

struct ScoreOptions {
  // Score the end-of-text event; when false, each sign probability is
  // renormalized over signs only, 1 - P(</s>|h).
  bool predict_end = true;
  // Condition the first sign on <s>; when false it uses the empty history.
  bool use_start = true;
};

// log2 P(text). Returns -infinity when an MLE model assigns probability 0.
double sequence_log_prob(const NgramModel& model, std::span<const Sign> signs,
                         const ScoreOptions& options = {});
double sequence_log_prob(const NgramModel& model, const Text& text, const ScoreOptions& options = {});
double corpus_log_prob(const NgramModel& model, const Corpus& corpus, const ScoreOptions& options = {});

// Samples a text by inverse-CDF draws over followers ordered by token id
// (signs ascending, end token last). Stops at </s> or after max_len signs; the
// result is empty if </s> is drawn first. Deterministic for a given seed.
std::vector<Sign> generate(const NgramModel& model, std::uint64_t seed, std::size_t max_len);

// Rows are histories <s> (row 0) and signs 1..V; columns are followers, sign
// ids 1..V and the end token V+1. Column 0 is unused and always 0.
class BigramMatrix {
 public:
  BigramMatrix(std::uint32_t vocabulary_size, std::vector<double> values);

  std::uint32_t vocabulary_size() const noexcept { return vocabulary_size_; }
  double at(TokenId history, TokenId follower) const {
    return values_[history * columns() + follower];
  }
  std::span<const double> row(TokenId history) const {
    return {values_.data() + history * columns(), columns()};
  }
  std::size_t columns() const noexcept { return vocabulary_size_ + 2; }

 private:
  std::uint32_t vocabulary_size_;
  std::vector<double> values_;
};

// P(b|a) from the model's order-2 level. Requires order >= 2.
BigramMatrix bigram_matrix(const NgramModel& model);
// No-correlation reference: every row is the model's unigram distribution.
BigramMatrix independence_matrix(const NgramModel& model);

// Model files are canonical JSON; see the README for the layout.
void save_model(const NgramModel& model, std::ostream& out);
std::string save_model_string(const NgramModel& model);
void save_model_file(const NgramModel& model, const std::string& path);
NgramModel load_model(std::istream& in);
NgramModel load_model_string(const std::string& bytes);
NgramModel load_model_file(const std::string& path);

}  // namespace signgram
