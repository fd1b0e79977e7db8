#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "signgram/corpus.hpp"
#include "signgram/ngram.hpp"

namespace signgram {

// 2x2 contingency table of adjacent-pair events for a pair (a, b):
//   k11 = c(ab)   k12 = c(a.) - c(ab)
//   k21 = c(.b) - c(ab)   k22 = N - k11 - k12 - k21
struct Contingency {
  std::uint64_t k11 = 0;
  std::uint64_t k12 = 0;
  std::uint64_t k21 = 0;
  std::uint64_t k22 = 0;
};

// G^2 = 2 sum k_ij ln(k_ij / E_ij), natural log, 0 ln 0 = 0.
double log_likelihood_ratio(const Contingency& table);

struct AssociationOptions {
  // Treat (<s>, a) and (a, </s>) as pair events too.
  bool include_boundaries = false;
};

// Adjacent-pair statistics taken from the order-2 table of a count set.
class PairTable {
 public:
  PairTable(const NgramCounts& counts, const AssociationOptions& options = {});

  std::uint64_t total() const noexcept { return total_; }
  std::uint64_t pair(TokenId a, TokenId b) const;
  Contingency contingency(TokenId a, TokenId b) const;

  struct Entry {
    TokenId a;
    TokenId b;
    std::uint64_t count;
  };
  const std::vector<Entry>& entries() const noexcept { return entries_; }

 private:
  std::vector<Entry> entries_;  // sorted by (a, b)
  std::vector<std::uint64_t> left_;
  std::vector<std::uint64_t> right_;
  std::uint64_t total_ = 0;
};

// Throws DataError when there are no pair events; throws Error if the
// counts are inconsistent (a negative derived cell).
double loglikelihood_pair(const NgramCounts& counts, Sign a, Sign b, const AssociationOptions& options = {});

struct SignificancePair {
  TokenId first = 0;
  TokenId second = 0;
  std::uint64_t observed_count = 0;
  double ll_value = 0;
  std::size_t frequency_rank = 0;
  std::size_t ll_rank = 0;
};

// All observed pairs by descending G^2 (ties: higher count, then ids), each
// carrying both its frequency rank and its LL rank; truncated to top_k.
std::vector<SignificancePair> rank_significant_pairs(const NgramCounts& counts, std::size_t top_k,
                                                     const AssociationOptions& options = {});

// Pairs ordered by frequency rank instead, same records.
std::vector<SignificancePair> rank_frequent_pairs(const NgramCounts& counts, std::size_t top_k,
                                                  const AssociationOptions& options = {});

}  // namespace signgram
