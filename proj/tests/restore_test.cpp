#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "signgram/error.hpp"
#include "signgram/restore.hpp"
#include "test_support.hpp"

using namespace signgram;
using testing_support::for_each_filling;

namespace {

struct Brute {
  std::vector<std::pair<double, std::vector<std::uint32_t>>> scored;  // (log_prob, filling)
  std::vector<std::vector<double>> posterior;                          // per gap, by sign id
};

Brute brute_force(const NgramModel& m, const Text& text) {
  const auto gaps = text.gap_positions();
  std::vector<Sign> signs;
  for (const Token& t : text.tokens) signs.push_back(t.is_gap() ? Sign{1} : t.sign());
  Brute b;
  const std::uint32_t v = m.vocabulary_size();
  b.posterior.assign(gaps.size(), std::vector<double>(v + 1, 0.0));
  double z = 0.0;
  for_each_filling(signs, gaps, v, [&](const std::vector<Sign>& filled) {
    const double lp = sequence_log_prob(m, std::span<const Sign>(filled));
    std::vector<std::uint32_t> f;
    for (std::size_t g : gaps) f.push_back(filled[g].id);
    b.scored.emplace_back(lp, f);
    const double p = std::exp2(lp);
    z += p;
    for (std::size_t i = 0; i < gaps.size(); ++i) b.posterior[i][filled[gaps[i]].id] += p;
  });
  for (auto& row : b.posterior)
    for (double& x : row) x /= z;
  std::stable_sort(b.scored.begin(), b.scored.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first > y.first;
    return x.second < y.second;
  });
  return b;
}

NgramModel random_bigram(Rng& rng, std::uint32_t v, Smoothing s = Smoothing::witten_bell) {
  const Corpus c = testing_support::random_corpus(rng, v, 5 + uniform_index(rng, 40), 6);
  ModelConfig cfg;
  cfg.smoothing = s;
  return NgramModel::train(c, cfg);
}

Text random_gapped(Rng& rng, std::uint32_t v, std::size_t len, std::size_t gaps) {
  Text t;
  for (std::size_t i = 0; i < len; ++i) t.tokens.push_back(Token::of(1 + static_cast<std::uint32_t>(uniform_index(rng, v))));
  std::vector<std::size_t> pos(len);
  for (std::size_t i = 0; i < len; ++i) pos[i] = i;
  for (std::size_t i = 0; i < gaps; ++i) {
    std::swap(pos[i], pos[i + uniform_index(rng, len - i)]);
    t.tokens[pos[i]] = Token::gap();
  }
  return t;
}

}  // namespace

TEST(TransitionTable, MatchesModelAndNeedsBigram) {
  Rng rng(2);
  const auto m = random_bigram(rng, 6);
  const TransitionTable table(m);
  for (TokenId a = 0; a <= 6; ++a) {
    const TokenId h[1] = {a};
    for (TokenId b = 1; b <= 7; ++b) EXPECT_EQ(table.log_prob(a, b), std::log2(m.probability(h, b)));
  }
  ModelConfig tri;
  tri.order = 3;
  EXPECT_THROW(TransitionTable(NgramModel::train(make_corpus(3, {{1, 2}}), tri)), DataError);
}

TEST(Restore, SingleGapEnumerationMatchesViterbi) {
  Rng rng(7);
  for (int round = 0; round < 40; ++round) {
    const auto m = random_bigram(rng, 8);
    const Text t = random_gapped(rng, 8, 1 + uniform_index(rng, 6), 1);
    const auto a = restore_single_gap(m, t, 5);
    const auto b = viterbi_restore(m, t, 5);
    EXPECT_EQ(a.method, RestoreMethod::enumeration);
    EXPECT_EQ(b.method, RestoreMethod::viterbi);
    ASSERT_EQ(a.assignments.size(), 5u);
    ASSERT_EQ(b.assignments.size(), 5u);
    EXPECT_EQ(a.gap_positions, b.gap_positions);
    for (std::size_t i = 0; i < 5; ++i) {
      EXPECT_EQ(a.assignments[i].signs, b.assignments[i].signs);
      EXPECT_EQ(a.assignments[i].log_prob, b.assignments[i].log_prob);
      EXPECT_NEAR(a.assignments[i].probability, b.assignments[i].probability, 1e-12);
    }
  }
}

TEST(Restore, ViterbiKBestEqualsBruteForce) {
  Rng rng(8);
  for (int round = 0; round < 60; ++round) {
    const std::uint32_t v = 2 + static_cast<std::uint32_t>(uniform_index(rng, 5));
    const auto m = random_bigram(rng, v, round % 2 ? Smoothing::katz : Smoothing::witten_bell);
    const std::size_t len = 1 + uniform_index(rng, 5);
    const Text t = random_gapped(rng, v, len, 1 + uniform_index(rng, std::min<std::size_t>(len, 3)));
    const auto brute = brute_force(m, t);
    const std::size_t k = 1 + uniform_index(rng, 6);
    const auto r = viterbi_restore(m, t, k);
    ASSERT_EQ(r.assignments.size(), std::min(k, brute.scored.size()));
    double z = 0.0;
    for (const auto& [lp, f] : brute.scored) z += std::exp2(lp);
    EXPECT_NEAR(std::exp2(r.total_log_prob), z, 1e-12 * z);
    for (std::size_t i = 0; i < r.assignments.size(); ++i) {
      std::vector<std::uint32_t> ids;
      for (Sign s : r.assignments[i].signs) ids.push_back(s.id);
      EXPECT_EQ(ids, brute.scored[i].second);
      EXPECT_EQ(r.assignments[i].log_prob, brute.scored[i].first);
      EXPECT_NEAR(r.assignments[i].probability, std::exp2(brute.scored[i].first) / z, 1e-12);
    }
  }
}

TEST(Restore, TiesBreakByLowerSignIds) {
  // Unseen-everything add-one model: all fillings tie.
  ModelConfig cfg;
  cfg.smoothing = Smoothing::add_one;
  const auto m = NgramModel(cfg, NgramCounts(2, kDefaultVocabularySize));
  const auto r = viterbi_restore(m, parse_text("? ?", kDefaultVocabularySize), 3);
  ASSERT_EQ(r.assignments.size(), 3u);
  EXPECT_EQ(r.assignments[0].signs, (std::vector<Sign>{Sign{1}, Sign{1}}));
  EXPECT_EQ(r.assignments[1].signs, (std::vector<Sign>{Sign{1}, Sign{2}}));
  EXPECT_EQ(r.assignments[2].signs, (std::vector<Sign>{Sign{1}, Sign{3}}));
}

TEST(Restore, Errors) {
  Rng rng(3);
  const auto m = random_bigram(rng, 5);
  EXPECT_THROW(viterbi_restore(m, parse_text("1 2", 5), 3), DataError);
  EXPECT_THROW(viterbi_restore(m, parse_text("1 ?", 5), 0), DataError);
  EXPECT_THROW(restore_single_gap(m, parse_text("? ?", 5), 3), DataError);
  EXPECT_THROW(viterbi_restore(m, Text{}, 3), DataError);
  Text outside = parse_text("1 ?", 5);
  outside.tokens[0] = Token::of(9u);
  EXPECT_THROW(viterbi_restore(m, outside, 3), DataError);
}

TEST(Restore, HigherOrderSingleGap) {
  Rng rng(10);
  const Corpus c = testing_support::random_corpus(rng, 5, 60, 6);
  ModelConfig cfg;
  cfg.order = 3;
  const auto m = NgramModel::train(c, cfg);
  const Text t = parse_text("2 ? 4 1", 5);
  const auto r = restore_single_gap(m, t, 5);
  const auto brute = brute_force(m, t);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(r.assignments[i].signs.front().id, brute.scored[i].second.front());
    EXPECT_NEAR(r.assignments[i].probability, brute.posterior[0][brute.scored[i].second.front()], 1e-12);
  }
}

TEST(Marginals, EqualBruteForcePosterior) {
  Rng rng(9);
  for (int round = 0; round < 60; ++round) {
    const std::uint32_t v = 2 + static_cast<std::uint32_t>(uniform_index(rng, 5));
    const auto m = random_bigram(rng, v);
    const std::size_t len = 1 + uniform_index(rng, 5);
    const Text t = random_gapped(rng, v, len, 1 + uniform_index(rng, std::min<std::size_t>(len, 3)));
    const auto brute = brute_force(m, t);
    const auto post = gap_marginals(TransitionTable(m), t);
    ASSERT_EQ(post.size(), t.gap_positions().size());
    for (std::size_t g = 0; g < post.size(); ++g) {
      EXPECT_EQ(post[g].position, t.gap_positions()[g]);
      double sum = 0.0;
      for (TokenId x = 1; x <= v; ++x) {
        EXPECT_NEAR(post[g].probabilities[x], brute.posterior[g][x], 1e-9);
        sum += post[g].probabilities[x];
      }
      EXPECT_NEAR(sum, 1.0, 1e-9);
    }
  }
}

TEST(Marginals, CommitmentsCondition) {
  Rng rng(14);
  const auto m = random_bigram(rng, 5);
  const TransitionTable table(m);
  const Text t = parse_text("? 3 ? ?", 5);
  const Commitments c{{2, Sign{4}}};
  const auto post = gap_marginals(table, t, c);
  ASSERT_EQ(post.size(), 2u);
  EXPECT_EQ(post[0].position, 0u);
  EXPECT_EQ(post[1].position, 3u);
  const auto brute = brute_force(m, parse_text("? 3 4 ?", 5));
  for (TokenId x = 1; x <= 5; ++x) {
    EXPECT_NEAR(post[0].probabilities[x], brute.posterior[0][x], 1e-12);
    EXPECT_NEAR(post[1].probabilities[x], brute.posterior[1][x], 1e-12);
  }
  EXPECT_THROW(gap_marginals(table, t, {{1, Sign{2}}}), DataError);  // not a gap
  EXPECT_THROW(gap_marginals(table, t, {{0, Sign{6}}}), DataError);  // outside vocabulary
  EXPECT_THROW(gap_marginals(table, t, {{9, Sign{1}}}), DataError);
  EXPECT_TRUE(gap_marginals(table, parse_text("1 2", 5)).empty());
  EXPECT_TRUE(gap_marginals(table, parse_text("? 2", 5), {{0, Sign{1}}}).empty());
}

TEST(Marginals, CommittingOneGapReranksItsNeighbour) {
  // 1 is always followed by 2 and 3 by 4: the second gap depends on the first.
  std::vector<std::vector<std::uint32_t>> texts;
  for (int i = 0; i < 30; ++i) texts.push_back({1, 2});
  for (int i = 0; i < 20; ++i) texts.push_back({3, 4});
  const auto m = NgramModel::train(make_corpus(4, texts), ModelConfig{});
  const TransitionTable table(m);
  const Text t = parse_text("? ?", 4);
  const auto before = gap_marginals(table, t);
  const auto after = gap_marginals(table, t, {{0, Sign{3}}});
  EXPECT_EQ(ranked_candidates(before[1]).front().id, 2u);
  ASSERT_EQ(after.size(), 1u);
  EXPECT_EQ(ranked_candidates(after[0]).front().id, 4u);
}

TEST(Marginals, CoverageSet) {
  GapPosterior g;
  g.probabilities = {0.0, 0.1, 0.5, 0.1, 0.3};
  EXPECT_EQ(coverage_set(g, 0.5), (std::vector<Sign>{Sign{2}}));
  EXPECT_EQ(coverage_set(g, 0.8), (std::vector<Sign>{Sign{2}, Sign{4}}));
  EXPECT_EQ(coverage_set(g, 0.85), (std::vector<Sign>{Sign{2}, Sign{4}, Sign{1}}));
  EXPECT_EQ(coverage_set(g, 1.0).size(), 4u);
  EXPECT_THROW(coverage_set(g, 0.0), DataError);
  // Growing coverage only grows the set.
  std::size_t prev = 0;
  for (double c = 0.05; c <= 1.0; c += 0.05) {
    const auto n = coverage_set(g, c).size();
    EXPECT_GE(n, prev);
    prev = n;
  }
}

TEST(MostProbableText, EqualsBruteForce) {
  Rng rng(15);
  for (int round = 0; round < 30; ++round) {
    const std::uint32_t v = 2 + static_cast<std::uint32_t>(uniform_index(rng, 4));
    const auto m = random_bigram(rng, v);
    const std::size_t len = 1 + uniform_index(rng, 4);
    Text blank;
    blank.tokens.assign(len, Token::gap());
    const auto brute = brute_force(m, blank);
    const auto best = most_probable_text(m, len);
    std::vector<std::uint32_t> ids;
    for (Sign s : best.signs) ids.push_back(s.id);
    EXPECT_EQ(ids, brute.scored.front().second);
    EXPECT_EQ(best.log_prob, brute.scored.front().first);
  }
  EXPECT_THROW(most_probable_text(random_bigram(rng, 3), 0), DataError);
}
