#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "signgram/corpus.hpp"
#include "signgram/ngram.hpp"

namespace signgram {

// Dense log2 P(b|a) of a bigram model: rows <s> and signs 1..V, columns
// signs 1..V and </s>. Values are log2 of exactly the probabilities the
// model returns, so lattice scores reproduce sequence_log_prob bit for bit.
class TransitionTable {
 public:
  // Requires a model of order 2.
  explicit TransitionTable(const NgramModel& model);

  std::uint32_t vocabulary_size() const noexcept { return vocabulary_size_; }
  double log_prob(TokenId history, TokenId follower) const {
    return values_[history * columns_ + follower];
  }

 private:
  std::uint32_t vocabulary_size_;
  std::size_t columns_;
  std::vector<double> values_;
};

struct Filling {
  std::vector<Sign> signs;  // one per gap, left to right
  double log_prob = 0;      // log2 P(completed text)
  // P(completed text) / sum over every possible filling of the gaps.
  double probability = 0;
};

enum class RestoreMethod { enumeration, viterbi };

struct RestorationResult {
  std::vector<std::size_t> gap_positions;
  // Descending log_prob; exact ties ordered lexicographically by sign ids.
  std::vector<Filling> assignments;
  RestoreMethod method = RestoreMethod::viterbi;
  // log2 of the total probability over all fillings.
  double total_log_prob = 0;
};

// Scores each of the V candidates for the single gap with sequence_log_prob.
// Works for any smoothed model of order >= 2.
RestorationResult restore_single_gap(const NgramModel& model, const Text& text, std::size_t top_k);

// List-Viterbi over the gap lattice (k best paths per state). Any number of gaps >= 1.
RestorationResult viterbi_restore(const TransitionTable& table, const Text& text, std::size_t top_k);
RestorationResult viterbi_restore(const NgramModel& model, const Text& text, std::size_t top_k);

struct ScoredText {
  std::vector<Sign> signs;
  double log_prob = 0;
};

// argmax over all length-L sign sequences of P(s_1|<s>) prod P(s_i|s_i-1) P(</s>|s_L).
ScoredText most_probable_text(const TransitionTable& table, std::size_t length);
ScoredText most_probable_text(const NgramModel& model, std::size_t length);

// Text position -> sign committed to that gap.
using Commitments = std::map<std::size_t, Sign>;

struct GapPosterior {
  std::size_t position = 0;
  // Indexed by sign id; element 0 is unused and 0.
  std::vector<double> probabilities;
};

// Exact posterior of every uncommitted gap given the legible signs and the
// commitments (sum-product over the restoration lattice). Throws DataError
// for commitments outside the vocabulary or on non-gap positions.
std::vector<GapPosterior> gap_marginals(const TransitionTable& table, const Text& text,
                                        const Commitments& committed = {});

// Sign ids ranked by descending posterior probability, ties by ascending id.
std::vector<Sign> ranked_candidates(const GapPosterior& posterior);

// Shortest prefix of ranked_candidates whose cumulative probability reaches
// `coverage`. Coverage 1 (or rounding short of it) gives the whole ranking.
std::vector<Sign> coverage_set(const GapPosterior& posterior, double coverage);

}  // namespace signgram
