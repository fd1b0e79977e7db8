#include "signgram/significance.hpp"

#include <algorithm>
#include <cmath>

#include "signgram/error.hpp"

namespace signgram {

double log_likelihood_ratio(const Contingency& t) {
  const double k[2][2] = {{static_cast<double>(t.k11), static_cast<double>(t.k12)},
                          {static_cast<double>(t.k21), static_cast<double>(t.k22)}};
  const double n = k[0][0] + k[0][1] + k[1][0] + k[1][1];
  if (n == 0.0) throw DataError("empty contingency table");
  const double row[2] = {k[0][0] + k[0][1], k[1][0] + k[1][1]};
  const double col[2] = {k[0][0] + k[1][0], k[0][1] + k[1][1]};
  double g2 = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (k[i][j] > 0.0) g2 += k[i][j] * std::log(k[i][j] * n / (row[i] * col[j]));
    }
  }
  return std::max(0.0, 2.0 * g2);
}

PairTable::PairTable(const NgramCounts& counts, const AssociationOptions& options) {
  if (counts.order() < 2) throw DataError("pair statistics need bigram counts");
  const std::uint32_t v = counts.vocabulary_size();
  const TokenId end = end_token(v);
  left_.assign(static_cast<std::size_t>(end) + 1, 0);
  right_.assign(static_cast<std::size_t>(end) + 1, 0);
  for (const auto& [history, entry] : counts.sorted_histories(2)) {
    const TokenId a = history.front();
    if (a == kStartToken && !options.include_boundaries) continue;
    for (const auto& [b, n] : entry->followers) {
      if (b == end && !options.include_boundaries) continue;
      entries_.push_back({a, b, n});
      left_[a] += n;
      right_[b] += n;
      total_ += n;
    }
  }
}

std::uint64_t PairTable::pair(TokenId a, TokenId b) const {
  const auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair{a, b},
                                   [](const Entry& e, const std::pair<TokenId, TokenId>& key) {
                                     return std::pair{e.a, e.b} < key;
                                   });
  return it != entries_.end() && it->a == a && it->b == b ? it->count : 0;
}

Contingency PairTable::contingency(TokenId a, TokenId b) const {
  if (total_ == 0) throw DataError("no adjacent pair events");
  if (a >= left_.size() || b >= right_.size()) throw DataError("token outside vocabulary");
  const std::uint64_t ab = pair(a, b);
  const std::uint64_t row = left_[a];
  const std::uint64_t col = right_[b];
  if (row < ab || col < ab || total_ + ab < row + col)
    throw Error("inconsistent pair counts: negative contingency cell");
  return Contingency{ab, row - ab, col - ab, total_ + ab - row - col};
}

double loglikelihood_pair(const NgramCounts& counts, Sign a, Sign b, const AssociationOptions& options) {
  if (a.id == 0 || a.id > counts.vocabulary_size() || b.id == 0 || b.id > counts.vocabulary_size())
    throw DataError("sign id outside vocabulary");
  return log_likelihood_ratio(PairTable(counts, options).contingency(a.id, b.id));
}

namespace {

std::vector<SignificancePair> ranked_pairs(const NgramCounts& counts, const AssociationOptions& options) {
  const PairTable table(counts, options);
  std::vector<SignificancePair> pairs;
  pairs.reserve(table.entries().size());
  for (const auto& e : table.entries()) {
    pairs.push_back({e.a, e.b, e.count, log_likelihood_ratio(table.contingency(e.a, e.b)), 0, 0});
  }
  // Entries come sorted by (a, b), so stable sorts keep id order within ties.
  std::stable_sort(pairs.begin(), pairs.end(), [](const SignificancePair& x, const SignificancePair& y) {
    return x.observed_count > y.observed_count;
  });
  for (std::size_t i = 0; i < pairs.size(); ++i) pairs[i].frequency_rank = i + 1;
  std::stable_sort(pairs.begin(), pairs.end(), [](const SignificancePair& x, const SignificancePair& y) {
    if (x.ll_value != y.ll_value) return x.ll_value > y.ll_value;
    if (x.observed_count != y.observed_count) return x.observed_count > y.observed_count;
    return std::pair{x.first, x.second} < std::pair{y.first, y.second};
  });
  for (std::size_t i = 0; i < pairs.size(); ++i) pairs[i].ll_rank = i + 1;
  return pairs;
}

}  // namespace

std::vector<SignificancePair> rank_significant_pairs(const NgramCounts& counts, std::size_t top_k,
                                                     const AssociationOptions& options) {
  if (top_k < 1) throw DataError("top_k must be >= 1");
  auto pairs = ranked_pairs(counts, options);
  if (pairs.size() > top_k) pairs.resize(top_k);
  return pairs;
}

std::vector<SignificancePair> rank_frequent_pairs(const NgramCounts& counts, std::size_t top_k,
                                                  const AssociationOptions& options) {
  if (top_k < 1) throw DataError("top_k must be >= 1");
  auto pairs = ranked_pairs(counts, options);
  std::sort(pairs.begin(), pairs.end(), [](const SignificancePair& x, const SignificancePair& y) {
    return x.frequency_rank < y.frequency_rank;
  });
  if (pairs.size() > top_k) pairs.resize(top_k);
  return pairs;
}

}  // namespace signgram
