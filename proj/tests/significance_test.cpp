#include <gtest/gtest.h>

#include <cmath>

#include "signgram/error.hpp"
#include "signgram/significance.hpp"
#include "test_support.hpp"

using namespace signgram;

TEST(LogLikelihood, PerfectAssociation) {
  EXPECT_NEAR(log_likelihood_ratio({10, 0, 0, 10}), 40.0 * std::log(2.0), 1e-9);
}

TEST(LogLikelihood, IndependentTablesGiveZero) {
  EXPECT_NEAR(log_likelihood_ratio({10, 20, 30, 60}), 0.0, 1e-9);
  EXPECT_NEAR(log_likelihood_ratio({1, 1, 1, 1}), 0.0, 1e-9);
  EXPECT_NEAR(log_likelihood_ratio({5, 0, 15, 0}), 0.0, 1e-9);
  EXPECT_THROW(log_likelihood_ratio({0, 0, 0, 0}), DataError);
}

TEST(LogLikelihood, MatchesDirectFormula) {
  // G2 = 2 sum k ln(k / E) with E from the margins.
  const Contingency t{7, 3, 2, 88};
  const double n = 100, r1 = 10, r2 = 90, c1 = 9, c2 = 91;
  const double g2 = 2 * (7 * std::log(7 / (r1 * c1 / n)) + 3 * std::log(3 / (r1 * c2 / n)) +
                         2 * std::log(2 / (r2 * c1 / n)) + 88 * std::log(88 / (r2 * c2 / n)));
  EXPECT_NEAR(log_likelihood_ratio(t), g2, 1e-9);
}

TEST(PairTable, ContingencyFromCorpus) {
  const Corpus c = make_corpus(5, {{1, 2, 3}, {1, 2}, {4, 2, 3}});
  const auto counts = count_ngrams(c, 2);
  const PairTable table(counts);
  EXPECT_EQ(table.total(), 5u);
  EXPECT_EQ(table.pair(1, 2), 2u);
  const auto k = table.contingency(1, 2);
  EXPECT_EQ(k.k11, 2u);
  EXPECT_EQ(k.k12, 0u);
  EXPECT_EQ(k.k21, 1u);
  EXPECT_EQ(k.k22, 2u);

  const PairTable bounded(counts, AssociationOptions{true});
  EXPECT_EQ(bounded.total(), 5u + 6u);
  EXPECT_EQ(bounded.pair(kStartToken, 1), 2u);
}

TEST(PairTable, RankingCarriesBothRanks) {
  std::vector<std::vector<std::uint32_t>> texts;
  for (int i = 0; i < 20; ++i) texts.push_back({1, 2});
  for (int i = 0; i < 30; ++i) texts.push_back({3, 3, 4, 3});
  texts.push_back({5, 1});
  const Corpus c = make_corpus(6, texts);
  const auto counts = count_ngrams(c, 2);
  const auto top = rank_significant_pairs(counts, 3);
  ASSERT_EQ(top.size(), 3u);
  for (std::size_t i = 0; i < top.size(); ++i) {
    EXPECT_EQ(top[i].ll_rank, i + 1);
    if (i) EXPECT_GE(top[i - 1].ll_value, top[i].ll_value);
    EXPECT_NEAR(top[i].ll_value, loglikelihood_pair(counts, Sign{top[i].first}, Sign{top[i].second}), 1e-9);
  }
  const auto freq = rank_frequent_pairs(counts, 10);
  for (std::size_t i = 0; i < freq.size(); ++i) {
    EXPECT_EQ(freq[i].frequency_rank, i + 1);
    if (i) EXPECT_GE(freq[i - 1].observed_count, freq[i].observed_count);
  }
  EXPECT_THROW(rank_significant_pairs(counts, 0), DataError);
  EXPECT_THROW(loglikelihood_pair(counts, Sign{1}, Sign{7}), DataError);
}

TEST(PairTable, NonNegativeOnRandomCorpora) {
  Rng rng(17);
  for (int round = 0; round < 30; ++round) {
    const Corpus c = testing_support::random_corpus(rng, 8, 60, 6);
    const auto counts = count_ngrams(c, 2);
    for (const auto& p : rank_significant_pairs(counts, 1000)) EXPECT_GE(p.ll_value, 0.0);
  }
}
