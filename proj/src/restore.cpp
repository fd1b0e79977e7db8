#include "signgram/restore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "signgram/error.hpp"

namespace signgram {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log2_sum_exp2(std::span<const double> values) {
  double m = kNegInf;
  for (double v : values) m = std::max(m, v);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double v : values) s += std::exp2(v - m);
  return m + std::log2(s);
}

void check_text(const Text& text, std::uint32_t vocabulary_size) {
  if (text.tokens.empty()) throw DataError("empty text");
  for (const Token& t : text.tokens) {
    if (!t.is_gap() && (t.sign().id == 0 || t.sign().id > vocabulary_size))
      throw DataError("sign id " + std::to_string(t.sign().id) + " outside vocabulary");
  }
}

// Lattice view of a text: the gaps are the free positions, everything else
// is a fixed token. Scores are accumulated left to right, one transition at
// a time, in the same order as sequence_log_prob.
struct Lattice {
  const TransitionTable& table;
  std::vector<TokenId> tokens;      // 0 marks a free position
  std::vector<std::size_t> gaps;    // free positions, ascending

  Lattice(const TransitionTable& t, const Text& text, const Commitments& committed = {}) : table(t) {
    check_text(text, t.vocabulary_size());
    tokens.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
      const Token& tok = text.tokens[i];
      if (tok.is_gap()) {
        const auto c = committed.find(i);
        if (c != committed.end()) {
          if (c->second.id == 0 || c->second.id > t.vocabulary_size())
            throw DataError("committed sign outside vocabulary");
          tokens.push_back(c->second.id);
        } else {
          tokens.push_back(0);
          gaps.push_back(i);
        }
      } else {
        tokens.push_back(tok.sign().id);
      }
    }
    for (const auto& [pos, sign] : committed) {
      if (pos >= text.size() || !text.tokens[pos].is_gap())
        throw DataError("commitment at position " + std::to_string(pos) + " is not a gap");
    }
  }

  std::uint32_t v() const { return table.vocabulary_size(); }
  TokenId end() const { return end_token(table.vocabulary_size()); }

  // score + transitions prev -> tokens[first..last) -> next.
  double extend(double score, TokenId prev, std::size_t first, std::size_t last, TokenId next) const {
    for (std::size_t i = first; i < last; ++i) {
      score += table.log_prob(prev, tokens[i]);
      prev = tokens[i];
    }
    return score + table.log_prob(prev, next);
  }

  // Boundaries of the fixed run before gap j (j == gaps.size() is the tail).
  std::size_t run_start(std::size_t j) const { return j == 0 ? 0 : gaps[j - 1] + 1; }
  std::size_t run_end(std::size_t j) const { return j == gaps.size() ? tokens.size() : gaps[j]; }

  // Log of the total probability over all fillings of the free gaps, plus
  // forward/backward tables (alpha[j][x], beta[j][x]) per gap.
  struct SumProduct {
    std::vector<std::vector<double>> alpha;
    std::vector<std::vector<double>> beta;
    double total = kNegInf;
  };

  SumProduct sum_product() const {
    SumProduct sp;
    const std::size_t p = gaps.size();
    const std::uint32_t vs = v();
    if (p == 0) {
      sp.total = extend(0.0, kStartToken, 0, tokens.size(), end());
      return sp;
    }
    sp.alpha.assign(p, std::vector<double>(vs + 1, kNegInf));
    sp.beta.assign(p, std::vector<double>(vs + 1, kNegInf));
    for (TokenId x = 1; x <= vs; ++x) sp.alpha[0][x] = extend(0.0, kStartToken, 0, run_end(0), x);
    std::vector<double> terms(vs);
    for (std::size_t j = 1; j < p; ++j) {
      for (TokenId x = 1; x <= vs; ++x) {
        for (TokenId y = 1; y <= vs; ++y)
          terms[y - 1] = extend(sp.alpha[j - 1][y], y, run_start(j), run_end(j), x);
        sp.alpha[j][x] = log2_sum_exp2(terms);
      }
    }
    for (TokenId x = 1; x <= vs; ++x) sp.beta[p - 1][x] = extend(0.0, x, run_start(p), run_end(p), end());
    for (std::size_t j = p - 1; j-- > 0;) {
      for (TokenId y = 1; y <= vs; ++y) {
        for (TokenId x = 1; x <= vs; ++x)
          terms[x - 1] = extend(0.0, y, run_start(j + 1), run_end(j + 1), x) + sp.beta[j + 1][x];
        sp.beta[j][y] = log2_sum_exp2(terms);
      }
    }
    for (TokenId x = 1; x <= vs; ++x) terms[x - 1] = sp.alpha[0][x] + sp.beta[0][x];
    sp.total = log2_sum_exp2(terms);
    return sp;
  }
};

struct Path {
  double score = kNegInf;
  std::vector<TokenId> filling;
};

// Higher score first; equal scores by lexicographically smaller filling.
bool better(double sa, const std::vector<TokenId>& fa, double sb, const std::vector<TokenId>& fb) {
  if (sa != sb) return sa > sb;
  return fa < fb;
}

RestorationResult finish(std::vector<Path> paths, const Lattice& lattice, RestoreMethod method) {
  RestorationResult result;
  result.gap_positions = lattice.gaps;
  result.method = method;
  result.total_log_prob = lattice.sum_product().total;
  for (Path& p : paths) {
    Filling f;
    for (TokenId t : p.filling) f.signs.push_back(Sign{t});
    f.log_prob = p.score;
    f.probability = result.total_log_prob == kNegInf ? 0.0 : std::exp2(p.score - result.total_log_prob);
    result.assignments.push_back(std::move(f));
  }
  return result;
}

std::vector<Path> list_viterbi(const Lattice& lat, std::size_t k) {
  const std::size_t p = lat.gaps.size();
  const std::uint32_t vs = lat.v();

  // states[x] = k best partial paths ending with sign x at the current gap.
  std::vector<std::vector<Path>> states(vs + 1);
  for (TokenId x = 1; x <= vs; ++x)
    states[x].push_back(Path{lat.extend(0.0, kStartToken, 0, lat.run_end(0), x), {x}});

  struct Candidate {
    double score;
    TokenId from;
    std::size_t index;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(static_cast<std::size_t>(vs) * k);

  auto select = [&](std::vector<Candidate>& cands, const std::vector<std::vector<Path>>& prev) {
    const std::size_t keep = std::min(k, cands.size());
    std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(keep), cands.end(),
                      [&](const Candidate& a, const Candidate& b) {
                        return better(a.score, prev[a.from][a.index].filling, b.score,
                                      prev[b.from][b.index].filling);
                      });
    cands.resize(keep);
  };

  for (std::size_t j = 1; j < p; ++j) {
    std::vector<std::vector<Path>> next(vs + 1);
    for (TokenId x = 1; x <= vs; ++x) {
      candidates.clear();
      for (TokenId y = 1; y <= vs; ++y) {
        for (std::size_t i = 0; i < states[y].size(); ++i) {
          const double s = lat.extend(states[y][i].score, y, lat.run_start(j), lat.run_end(j), x);
          candidates.push_back({s, y, i});
        }
      }
      select(candidates, states);
      for (const Candidate& c : candidates) {
        Path path{c.score, states[c.from][c.index].filling};
        path.filling.push_back(x);
        next[x].push_back(std::move(path));
      }
    }
    states = std::move(next);
  }

  candidates.clear();
  for (TokenId y = 1; y <= vs; ++y) {
    for (std::size_t i = 0; i < states[y].size(); ++i) {
      const double s = lat.extend(states[y][i].score, y, lat.run_start(p), lat.run_end(p), lat.end());
      candidates.push_back({s, y, i});
    }
  }
  select(candidates, states);
  std::vector<Path> out;
  for (const Candidate& c : candidates) out.push_back(Path{c.score, states[c.from][c.index].filling});
  return out;
}

}  // namespace

TransitionTable::TransitionTable(const NgramModel& model)
    : vocabulary_size_(model.vocabulary_size()), columns_(static_cast<std::size_t>(model.vocabulary_size()) + 2) {
  if (model.config().order != 2) throw DataError("lattice restoration needs a bigram (order 2) model");
  values_.assign((static_cast<std::size_t>(vocabulary_size_) + 1) * columns_, kNegInf);
  for (TokenId a = 0; a <= vocabulary_size_; ++a) {
    const TokenId h[1] = {a};
    if (!model.defined_for(h)) continue;
    const auto dist = model.distribution(h);
    for (TokenId b = 1; b < columns_; ++b) values_[a * columns_ + b] = std::log2(dist.probabilities[b]);
  }
}

RestorationResult restore_single_gap(const NgramModel& model, const Text& text, std::size_t top_k) {
  if (top_k < 1) throw DataError("top_k must be >= 1");
  if (model.config().order < 2) throw DataError("restoration needs a model of order >= 2");
  check_text(text, model.vocabulary_size());
  const auto gaps = text.gap_positions();
  if (gaps.size() != 1) throw DataError("restore_single_gap needs exactly one gap; use viterbi_restore");

  std::vector<Sign> signs;
  for (const Token& t : text.tokens) signs.push_back(t.is_gap() ? Sign{} : t.sign());
  const std::uint32_t vs = model.vocabulary_size();
  std::vector<Path> all;
  all.reserve(vs);
  std::vector<double> scores;
  scores.reserve(vs);
  for (TokenId x = 1; x <= vs; ++x) {
    signs[gaps.front()] = Sign{x};
    const double s = sequence_log_prob(model, std::span<const Sign>(signs));
    all.push_back(Path{s, {x}});
    scores.push_back(s);
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const Path& a, const Path& b) { return better(a.score, a.filling, b.score, b.filling); });
  if (all.size() > top_k) all.resize(top_k);

  RestorationResult result;
  result.gap_positions = gaps;
  result.method = RestoreMethod::enumeration;
  result.total_log_prob = log2_sum_exp2(scores);
  for (Path& p : all) {
    Filling f{{Sign{p.filling.front()}}, p.score, 0.0};
    f.probability = result.total_log_prob == kNegInf ? 0.0 : std::exp2(p.score - result.total_log_prob);
    result.assignments.push_back(std::move(f));
  }
  return result;
}

RestorationResult viterbi_restore(const TransitionTable& table, const Text& text, std::size_t top_k) {
  if (top_k < 1) throw DataError("top_k must be >= 1");
  const Lattice lattice(table, text);
  if (lattice.gaps.empty()) throw DataError("text has no gaps to restore");
  return finish(list_viterbi(lattice, top_k), lattice, RestoreMethod::viterbi);
}

RestorationResult viterbi_restore(const NgramModel& model, const Text& text, std::size_t top_k) {
  return viterbi_restore(TransitionTable(model), text, top_k);
}

ScoredText most_probable_text(const TransitionTable& table, std::size_t length) {
  if (length < 1) throw DataError("text length must be >= 1");
  Text blank;
  blank.tokens.assign(length, Token::gap());
  const Lattice lattice(table, blank);
  const auto best = list_viterbi(lattice, 1);
  ScoredText out;
  out.log_prob = best.front().score;
  for (TokenId t : best.front().filling) out.signs.push_back(Sign{t});
  return out;
}

ScoredText most_probable_text(const NgramModel& model, std::size_t length) {
  return most_probable_text(TransitionTable(model), length);
}

std::vector<GapPosterior> gap_marginals(const TransitionTable& table, const Text& text,
                                        const Commitments& committed) {
  const Lattice lattice(table, text, committed);
  std::vector<GapPosterior> out;
  if (lattice.gaps.empty()) return out;
  const auto sp = lattice.sum_product();
  if (sp.total == kNegInf) throw DataError("no filling of the gaps has positive probability");
  const std::uint32_t vs = table.vocabulary_size();
  for (std::size_t j = 0; j < lattice.gaps.size(); ++j) {
    GapPosterior g;
    g.position = lattice.gaps[j];
    g.probabilities.assign(vs + 1, 0.0);
    for (TokenId x = 1; x <= vs; ++x) g.probabilities[x] = std::exp2(sp.alpha[j][x] + sp.beta[j][x] - sp.total);
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<Sign> ranked_candidates(const GapPosterior& posterior) {
  std::vector<Sign> ranked;
  for (TokenId x = 1; x < posterior.probabilities.size(); ++x) ranked.push_back(Sign{x});
  std::stable_sort(ranked.begin(), ranked.end(), [&](Sign a, Sign b) {
    return posterior.probabilities[a.id] > posterior.probabilities[b.id];
  });
  return ranked;
}

std::vector<Sign> coverage_set(const GapPosterior& posterior, double coverage) {
  if (!(coverage > 0.0 && coverage <= 1.0)) throw DataError("coverage must be in (0, 1]");
  const auto ranked = ranked_candidates(posterior);
  if (coverage >= 1.0) return ranked;
  std::vector<Sign> out;
  double cumulative = 0.0;
  for (Sign s : ranked) {
    out.push_back(s);
    cumulative += posterior.probabilities[s.id];
    if (cumulative >= coverage) break;
  }
  return out;
}

}  // namespace signgram
