#include "signgram/ngram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "signgram/error.hpp"
#include "signgram/random.hpp"

namespace signgram {

std::string_view to_string(Smoothing s) {
  switch (s) {
    case Smoothing::mle:
      return "mle";
    case Smoothing::add_one:
      return "add_one";
    case Smoothing::witten_bell:
      return "witten_bell";
    case Smoothing::katz:
      return "katz";
  }
  return "unknown";
}

Smoothing parse_smoothing(std::string_view name) {
  if (name == "mle") return Smoothing::mle;
  if (name == "add_one" || name == "add-one") return Smoothing::add_one;
  if (name == "witten_bell" || name == "witten-bell" || name == "wb") return Smoothing::witten_bell;
  if (name == "katz") return Smoothing::katz;
  throw DataError("unknown smoothing '" + std::string(name) + "'");
}

void ModelConfig::validate() const {
  if (order < 1 || order > kMaxOrder) throw DataError("model order must be in [1, 5]");
  if (vocabulary_size < 1 || vocabulary_size > kMaxVocabularySize)
    throw DataError("vocabulary size must be in [1, 65534]");
  if (katz_gt_threshold < 0) throw DataError("Katz threshold must be >= 0");
  if (!(katz_fallback_discount > 0.0 && katz_fallback_discount < 1.0))
    throw DataError("Katz fallback discount must be in (0, 1)");
}

// ---------------------------------------------------------------------------
// Counting

std::uint64_t HistoryCounts::count(TokenId follower) const {
  const auto it = std::lower_bound(
      followers.begin(), followers.end(), follower,
      [](const std::pair<TokenId, std::uint64_t>& e, TokenId t) { return e.first < t; });
  return it != followers.end() && it->first == follower ? it->second : 0;
}

NgramCounts::NgramCounts(int order, std::uint32_t vocabulary_size)
    : order_(order), vocabulary_size_(vocabulary_size), tables_(static_cast<std::size_t>(order)) {
  if (order < 1 || order > kMaxOrder) throw DataError("model order must be in [1, 5]");
  if (vocabulary_size < 1 || vocabulary_size > kMaxVocabularySize)
    throw DataError("vocabulary size must be in [1, 65534]");
}

std::uint64_t NgramCounts::key(std::span<const TokenId> history) const {
  std::uint64_t k = 0;
  for (std::size_t i = 0; i < history.size(); ++i) k |= static_cast<std::uint64_t>(history[i]) << (16 * i);
  return k;
}

void NgramCounts::add(std::span<const TokenId> history, TokenId follower, std::uint64_t n) {
  if (history.size() >= static_cast<std::size_t>(order_)) throw DataError("history longer than order - 1");
  if (follower == kStartToken || follower > end_token(vocabulary_size_))
    throw DataError("invalid follower token");
  for (TokenId t : history) {
    if (t > vocabulary_size_) throw DataError("invalid history token");
  }
  HistoryCounts& entry = tables_[history.size()][key(history)];
  entry.total += n;
  auto it = std::lower_bound(
      entry.followers.begin(), entry.followers.end(), follower,
      [](const std::pair<TokenId, std::uint64_t>& e, TokenId t) { return e.first < t; });
  if (it != entry.followers.end() && it->first == follower) {
    it->second += n;
  } else {
    entry.followers.insert(it, {follower, n});
  }
}

void NgramCounts::add_text(std::span<const Sign> signs) {
  std::vector<TokenId> seq;
  seq.reserve(signs.size() + 2);
  seq.push_back(kStartToken);
  for (Sign s : signs) {
    if (s.id == 0 || s.id > vocabulary_size_) throw DataError("sign id outside vocabulary");
    seq.push_back(s.id);
  }
  seq.push_back(end_token(vocabulary_size_));
  const std::span<const TokenId> all(seq);
  for (std::size_t i = 1; i < seq.size(); ++i) {
    for (std::size_t m = 1; m <= static_cast<std::size_t>(order_) && m <= i + 1; ++m) {
      add(all.subspan(i - (m - 1), m - 1), seq[i]);
    }
  }
}

void NgramCounts::merge(const NgramCounts& other) {
  if (other.order_ != order_ || other.vocabulary_size_ != vocabulary_size_)
    throw DataError("cannot merge count tables of different shape");
  for (int m = 1; m <= order_; ++m) {
    for (const auto& [hist, entry] : other.sorted_histories(m)) {
      for (const auto& [follower, n] : entry->followers) add(hist, follower, n);
    }
  }
}

const HistoryCounts* NgramCounts::find(std::span<const TokenId> history) const {
  if (history.size() >= static_cast<std::size_t>(order_)) return nullptr;
  const auto& table = tables_[history.size()];
  const auto it = table.find(key(history));
  return it == table.end() ? nullptr : &it->second;
}

std::uint64_t NgramCounts::count(std::span<const TokenId> history, TokenId follower) const {
  const HistoryCounts* e = find(history);
  return e ? e->count(follower) : 0;
}

std::map<std::uint64_t, std::uint64_t> NgramCounts::count_of_counts(int m) const {
  std::map<std::uint64_t, std::uint64_t> coc;
  if (m < 1 || m > order_) return coc;
  for (const auto& [k, entry] : tables_[m - 1]) {
    for (const auto& f : entry.followers) ++coc[f.second];
  }
  return coc;
}

std::size_t NgramCounts::history_count(int m) const {
  return m >= 1 && m <= order_ ? tables_[m - 1].size() : 0;
}

std::vector<std::pair<std::vector<TokenId>, const HistoryCounts*>> NgramCounts::sorted_histories(
    int m) const {
  std::vector<std::pair<std::vector<TokenId>, const HistoryCounts*>> out;
  if (m < 1 || m > order_) return out;
  const auto& table = tables_[m - 1];
  out.reserve(table.size());
  for (const auto& [k, entry] : table) {
    std::vector<TokenId> hist(static_cast<std::size_t>(m - 1));
    for (std::size_t i = 0; i < hist.size(); ++i) hist[i] = static_cast<TokenId>((k >> (16 * i)) & 0xFFFF);
    out.emplace_back(std::move(hist), &entry);
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  return out;
}

NgramCounts count_ngrams(const Corpus& corpus, int order) {
  NgramCounts counts(order, corpus.vocabulary_size);
  for (const Text& text : corpus.texts) {
    if (text.damaged()) throw DataError("cannot count n-grams of a damaged text");
    counts.add_text(text.signs());
  }
  return counts;
}

// ---------------------------------------------------------------------------
// Estimators

double ConditionalDistribution::sum() const {
  return std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
}

double KatzDiscounts::discounted(std::uint64_t r) const {
  if (r > static_cast<std::uint64_t>(threshold)) return static_cast<double>(r);
  if (absolute_fallback) return static_cast<double>(r) - fallback_discount;
  return good_turing[r];
}

KatzDiscounts katz_discounts(const NgramCounts& counts, int m, int threshold, double fallback_discount) {
  KatzDiscounts d;
  d.threshold = threshold;
  d.fallback_discount = fallback_discount;
  d.good_turing.assign(static_cast<std::size_t>(threshold) + 1, 0.0);
  const auto coc = counts.count_of_counts(m);
  auto n_of = [&](std::uint64_t r) {
    const auto it = coc.find(r);
    return it == coc.end() ? std::uint64_t{0} : it->second;
  };
  double previous = 0.0;
  for (int r = 1; r <= threshold; ++r) {
    const std::uint64_t nr = n_of(static_cast<std::uint64_t>(r));
    d.good_turing[r] = r;
    if (nr == 0) continue;
    const std::uint64_t next = n_of(static_cast<std::uint64_t>(r) + 1);
    const double star = static_cast<double>(r + 1) * static_cast<double>(next) / static_cast<double>(nr);
    // Good-Turing is usable only when every needed r* is a real, increasing discount.
    if (next == 0 || star >= r || star <= previous) {
      d.absolute_fallback = true;
      break;
    }
    d.good_turing[r] = star;
    previous = star;
  }
  return d;
}

namespace {

struct Estimator {
  const NgramCounts& counts;
  Smoothing smoothing;
  const std::vector<KatzDiscounts>* katz = nullptr;

  std::uint32_t vocab() const { return counts.vocabulary_size(); }
  TokenId end() const { return end_token(counts.vocabulary_size()); }

  void fill(std::span<const TokenId> h, std::vector<double>& out) const {
    out.assign(static_cast<std::size_t>(end()) + 1, 0.0);
    switch (smoothing) {
      case Smoothing::mle:
        mle(h, out);
        break;
      case Smoothing::add_one:
        add_one(h, out);
        break;
      case Smoothing::witten_bell:
        witten_bell(h, out);
        break;
      case Smoothing::katz:
        katz_backoff(h, out);
        break;
    }
  }

  void mle(std::span<const TokenId> h, std::vector<double>& out) const {
    const HistoryCounts* e = counts.find(h);
    if (e == nullptr || e->total == 0) throw DataError("maximum-likelihood estimate undefined for an unseen history");
    const double total = static_cast<double>(e->total);
    for (const auto& [t, c] : e->followers) out[t] = static_cast<double>(c) / total;
  }

  void add_one(std::span<const TokenId> h, std::vector<double>& out) const {
    const HistoryCounts* e = counts.find(h);
    const double total = e ? static_cast<double>(e->total) : 0.0;
    const double denom = total + static_cast<double>(vocab()) + 1.0;
    for (TokenId t = 1; t <= end(); ++t) out[t] = 1.0 / denom;
    if (e) {
      for (const auto& [t, c] : e->followers) out[t] = (static_cast<double>(c) + 1.0) / denom;
    }
  }

  void witten_bell(std::span<const TokenId> h, std::vector<double>& out) const {
    if (h.empty()) return add_one(h, out);
    const HistoryCounts* e = counts.find(h);
    if (e == nullptr || e->total == 0) return witten_bell(h.subspan(1), out);
    const double total = static_cast<double>(e->total);
    const double types = static_cast<double>(e->types());
    const std::size_t unseen_types = static_cast<std::size_t>(vocab()) + 1 - e->types();
    if (unseen_types == 0) {
      for (const auto& [t, c] : e->followers) out[t] = static_cast<double>(c) / total;
      return;
    }
    const double denom = total + types;
    const double unseen = types / (static_cast<double>(unseen_types) * denom);
    for (TokenId t = 1; t <= end(); ++t) out[t] = unseen;
    for (const auto& [t, c] : e->followers) out[t] = static_cast<double>(c) / denom;
  }

  void katz_backoff(std::span<const TokenId> h, std::vector<double>& out) const {
    if (h.empty()) return add_one(h, out);
    const HistoryCounts* e = counts.find(h);
    if (e == nullptr || e->total == 0) return katz_backoff(h.subspan(1), out);

    std::vector<double> lower(out.size(), 0.0);
    katz_backoff(h.subspan(1), lower);
    std::fill(out.begin(), out.end(), 0.0);

    const KatzDiscounts& d = (*katz)[h.size() + 1];
    const std::size_t unseen_types = static_cast<std::size_t>(vocab()) + 1 - e->types();

    double discounted_total = 0.0;
    for (const auto& f : e->followers) discounted_total += d.discounted(f.second);

    if (unseen_types == 0) {
      for (const auto& [t, c] : e->followers) out[t] = d.discounted(c) / discounted_total;
      return;
    }

    double denom = static_cast<double>(e->total);
    // No mass left for unseen followers (all counts above the threshold):
    // enlarge the denominator by one so the chain stays ergodic.
    if (1.0 - discounted_total / denom <= 1e-12) denom += 1.0;

    double seen_mass = 0.0;
    for (const auto& [t, c] : e->followers) {
      out[t] = d.discounted(c) / denom;
      seen_mass += out[t];
    }
    double lower_unseen = 0.0;
    for (TokenId t = 1; t <= end(); ++t) {
      if (e->count(t) == 0) lower_unseen += lower[t];
    }
    const double alpha = (1.0 - seen_mass) / lower_unseen;
    for (TokenId t = 1; t <= end(); ++t) {
      if (e->count(t) == 0) out[t] = alpha * lower[t];
    }
  }
};

void check_history(const NgramCounts& counts, std::span<const TokenId> history) {
  if (history.size() >= static_cast<std::size_t>(counts.order()))
    throw DataError("history longer than order - 1");
  for (TokenId t : history) {
    if (t > counts.vocabulary_size()) throw DataError("invalid history token");
  }
}

ConditionalDistribution run(const NgramCounts& counts, Smoothing smoothing,
                            std::span<const TokenId> history,
                            const std::vector<KatzDiscounts>* katz = nullptr) {
  check_history(counts, history);
  ConditionalDistribution dist;
  dist.history.assign(history.begin(), history.end());
  Estimator{counts, smoothing, katz}.fill(history, dist.probabilities);
  return dist;
}

std::vector<KatzDiscounts> all_katz_discounts(const NgramCounts& counts, int threshold, double discount) {
  std::vector<KatzDiscounts> out(static_cast<std::size_t>(counts.order()) + 1);
  for (int m = 2; m <= counts.order(); ++m) out[m] = katz_discounts(counts, m, threshold, discount);
  return out;
}

}  // namespace

ConditionalDistribution mle_distribution(const NgramCounts& counts, std::span<const TokenId> history) {
  return run(counts, Smoothing::mle, history);
}

ConditionalDistribution add_one_distribution(const NgramCounts& counts, std::span<const TokenId> history) {
  return run(counts, Smoothing::add_one, history);
}

ConditionalDistribution witten_bell_distribution(const NgramCounts& counts,
                                                 std::span<const TokenId> history) {
  return run(counts, Smoothing::witten_bell, history);
}

ConditionalDistribution katz_distribution(const NgramCounts& counts, std::span<const TokenId> history,
                                          int gt_threshold, double fallback_discount) {
  const auto discounts = all_katz_discounts(counts, gt_threshold, fallback_discount);
  return run(counts, Smoothing::katz, history, &discounts);
}

// ---------------------------------------------------------------------------
// Model

NgramModel::NgramModel(ModelConfig config, NgramCounts counts, std::string label)
    : config_(config), counts_(std::move(counts)), label_(std::move(label)) {
  config_.validate();
  if (counts_.order() != config_.order || counts_.vocabulary_size() != config_.vocabulary_size)
    throw DataError("count table does not match model configuration");
  if (config_.smoothing == Smoothing::katz)
    katz_ = all_katz_discounts(counts_, config_.katz_gt_threshold, config_.katz_fallback_discount);
}

NgramModel NgramModel::train(const Corpus& corpus, const ModelConfig& config) {
  ModelConfig c = config;
  c.vocabulary_size = corpus.vocabulary_size;
  c.validate();
  return NgramModel(c, count_ngrams(corpus, c.order), corpus.label);
}

namespace {

std::span<const TokenId> truncate(std::span<const TokenId> history, int order) {
  const std::size_t keep = static_cast<std::size_t>(order - 1);
  return history.size() > keep ? history.subspan(history.size() - keep) : history;
}

}  // namespace

ConditionalDistribution NgramModel::distribution(std::span<const TokenId> history) const {
  const auto h = truncate(history, config_.order);
  return run(counts_, config_.smoothing, h, &katz_);
}

double NgramModel::probability(std::span<const TokenId> history, TokenId follower) const {
  if (follower == kStartToken || follower > end()) throw DataError("invalid follower token");
  return distribution(history).probabilities[follower];
}

bool NgramModel::defined_for(std::span<const TokenId> history) const {
  if (config_.smoothing != Smoothing::mle) return true;
  const HistoryCounts* e = counts_.find(truncate(history, config_.order));
  return e != nullptr && e->total > 0;
}

// ---------------------------------------------------------------------------
// Scoring and generation

double sequence_log_prob(const NgramModel& model, std::span<const Sign> signs, const ScoreOptions& options) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  const TokenId end = model.end();
  std::vector<TokenId> history;
  history.reserve(signs.size() + 1);
  if (options.use_start) history.push_back(kStartToken);
  double log_prob = 0.0;
  for (Sign s : signs) {
    if (s.id == 0 || s.id > model.vocabulary_size()) throw DataError("sign id outside vocabulary");
    if (!model.defined_for(history)) return kNegInf;
    const auto dist = model.distribution(history);
    double p = dist.probabilities[s.id];
    if (!options.predict_end) {
      const double rest = 1.0 - dist.probabilities[end];
      p = rest > 0.0 ? p / rest : 0.0;
    }
    if (!(p > 0.0)) return kNegInf;
    log_prob += std::log2(p);
    history.push_back(s.id);
  }
  if (options.predict_end) {
    if (!model.defined_for(history)) return kNegInf;
    const double p = model.distribution(history).probabilities[end];
    if (!(p > 0.0)) return kNegInf;
    log_prob += std::log2(p);
  }
  return log_prob;
}

double sequence_log_prob(const NgramModel& model, const Text& text, const ScoreOptions& options) {
  const auto signs = text.signs();
  return sequence_log_prob(model, std::span<const Sign>(signs), options);
}

double corpus_log_prob(const NgramModel& model, const Corpus& corpus, const ScoreOptions& options) {
  double total = 0.0;
  for (const Text& t : corpus.texts) total += sequence_log_prob(model, t, options);
  return total;
}

std::vector<Sign> generate(const NgramModel& model, std::uint64_t seed, std::size_t max_len) {
  Rng rng(seed);
  const TokenId end = model.end();
  std::vector<TokenId> history{kStartToken};
  std::vector<Sign> out;
  while (out.size() < max_len) {
    const auto dist = model.distribution(history);
    const auto& p = dist.probabilities;
    TokenId choice = end;
    while (choice > 1 && p[choice] == 0.0) --choice;
    const double u = uniform01(rng);
    double cumulative = 0.0;
    for (TokenId t = 1; t <= end; ++t) {
      cumulative += p[t];
      if (u < cumulative) {
        choice = t;
        break;
      }
    }
    if (choice == end) break;
    out.push_back(Sign{choice});
    history.push_back(choice);
  }
  return out;
}

BigramMatrix::BigramMatrix(std::uint32_t vocabulary_size, std::vector<double> values)
    : vocabulary_size_(vocabulary_size), values_(std::move(values)) {
  if (values_.size() != static_cast<std::size_t>(vocabulary_size_ + 1) * columns())
    throw DataError("bigram matrix has the wrong shape");
}

BigramMatrix bigram_matrix(const NgramModel& model) {
  if (model.config().order < 2) throw DataError("bigram matrix needs a model of order >= 2");
  const std::uint32_t v = model.vocabulary_size();
  const std::size_t cols = static_cast<std::size_t>(v) + 2;
  std::vector<double> values((static_cast<std::size_t>(v) + 1) * cols, 0.0);
  for (TokenId a = 0; a <= v; ++a) {
    const TokenId h[1] = {a};
    if (!model.defined_for(h)) continue;
    const auto dist = model.distribution(h);
    std::copy(dist.probabilities.begin(), dist.probabilities.end(), values.begin() + a * cols);
  }
  return BigramMatrix(v, std::move(values));
}

BigramMatrix independence_matrix(const NgramModel& model) {
  const std::uint32_t v = model.vocabulary_size();
  const std::size_t cols = static_cast<std::size_t>(v) + 2;
  const auto unigram = model.distribution({});
  std::vector<double> values((static_cast<std::size_t>(v) + 1) * cols, 0.0);
  for (TokenId a = 0; a <= v; ++a)
    std::copy(unigram.probabilities.begin(), unigram.probabilities.end(), values.begin() + a * cols);
  return BigramMatrix(v, std::move(values));
}

}  // namespace signgram
