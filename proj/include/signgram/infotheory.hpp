#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "signgram/corpus.hpp"
#include "signgram/ngram.hpp"

namespace signgram {

// -sum p log2 p, with 0 log 0 = 0. Throws DataError on negative entries or
// when the probabilities do not sum to 1 within 1e-9.
double entropy(std::span<const double> probabilities);

using JointDistribution = std::map<std::pair<TokenId, TokenId>, double>;

// sum P(ab) log2 [P(ab) / (P_L(a) P_R(b))] with left/right marginals taken
// from the joint itself.
double mutual_information(const JointDistribution& joint);

struct EntropyReport {
  double entropy_bits = 0;
  double mutual_information_bits = 0;
  // Sign tokens behind the entropy estimate.
  std::size_t token_count = 0;
  // Adjacent pairs behind the mutual information estimate.
  std::size_t pair_count = 0;
};

struct PairOptions {
  // Count (<s>, s_1) and (s_N, </s>) as pairs too.
  bool include_boundaries = false;
};

// Entropy of the unigram sign distribution and mutual information of
// adjacent sign pairs. Throws DataError if there are no adjacent pairs.
EntropyReport corpus_entropy_mi(const Corpus& corpus, const PairOptions& options = {});

struct PerplexityOptions {
  // Count each text's end token as a prediction event.
  bool include_end = true;
};

struct PerplexityReport {
  int order = 0;
  double cross_entropy_bits_per_token = 0;
  double perplexity = 0;
  std::size_t held_out_token_count = 0;
};

// -(1/M) sum log2 P(token | history) over all prediction events of the held-out texts.
PerplexityReport cross_entropy_perplexity(const NgramModel& model, const Corpus& held_out,
                                          const PerplexityOptions& options = {});

// Trains one model per order on `train` and evaluates each on `held_out`.
std::vector<PerplexityReport> perplexity_sweep(const Corpus& train, const Corpus& held_out,
                                               const ModelConfig& base, std::span<const int> orders,
                                               const PerplexityOptions& options = {});

}  // namespace signgram
