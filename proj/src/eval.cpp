#include "signgram/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>

#include "signgram/error.hpp"
#include "signgram/random.hpp"

namespace signgram {

std::vector<FoldSplit> kfold_split(const Corpus& corpus, int k, std::uint64_t seed) {
  if (k < 2) throw DataError("k must be >= 2");
  if (corpus.size() < static_cast<std::size_t>(k)) throw DataError("fewer texts than folds");

  std::vector<std::size_t> order(corpus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[uniform_index(rng, i)]);

  const std::size_t n = corpus.size();
  const std::size_t kk = static_cast<std::size_t>(k);
  std::vector<std::size_t> bounds(kk + 1, 0);
  for (std::size_t f = 0; f < kk; ++f) bounds[f + 1] = bounds[f] + n / kk + (f < n % kk ? 1 : 0);

  std::vector<FoldSplit> out(kk);
  for (std::size_t f = 0; f < kk; ++f) {
    out[f].train.vocabulary_size = out[f].test.vocabulary_size = corpus.vocabulary_size;
    out[f].train.label = corpus.label + "/train" + std::to_string(f);
    out[f].test.label = corpus.label + "/test" + std::to_string(f);
    for (std::size_t g = 0; g < kk; ++g) {
      Corpus& dst = g == f ? out[f].test : out[f].train;
      for (std::size_t i = bounds[g]; i < bounds[g + 1]; ++i) dst.texts.push_back(corpus.texts[order[i]]);
    }
  }
  return out;
}

double TrialOutcome::sensitivity() const noexcept {
  if (evaluated() == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(true_positives) / static_cast<double>(evaluated());
}

namespace {

// Posterior of the single gap at `position`.
GapPosterior single_gap_posterior(const NgramModel& model, const TransitionTable* table, const Text& text,
                                  std::size_t position) {
  if (table != nullptr) return gap_marginals(*table, text).front();
  const auto result = restore_single_gap(model, text, model.vocabulary_size());
  GapPosterior g;
  g.position = position;
  g.probabilities.assign(model.vocabulary_size() + 1, 0.0);
  for (const Filling& f : result.assignments) g.probabilities[f.signs.front().id] = f.probability;
  return g;
}

std::vector<TrialOutcome> run_trial(const NgramModel& model, const TransitionTable* table, const Corpus& test,
                                    std::span<const double> coverages, std::uint64_t seed) {
  for (double c : coverages) {
    if (!(c > 0.0 && c <= 1.0)) throw DataError("coverage must be in (0, 1]");
  }
  std::vector<TrialOutcome> out(coverages.size());
  Rng rng(seed);
  for (const Text& original : test.texts) {
    if (original.size() < 2) {
      for (auto& o : out) ++o.skipped;
      continue;
    }
    const std::size_t position = uniform_index(rng, original.size());
    const Sign truth = original.tokens[position].sign();
    Text gapped = original;
    gapped.tokens[position] = Token::gap();
    const GapPosterior posterior = single_gap_posterior(model, table, gapped, position);
    const auto ranked = ranked_candidates(posterior);
    const auto rank = static_cast<std::size_t>(std::find(ranked.begin(), ranked.end(), truth) - ranked.begin());
    // The truth is in the coverage set iff the mass ranked above it is still short of the coverage.
    double before = 0.0;
    for (std::size_t i = 0; i < rank; ++i) before += posterior.probabilities[ranked[i].id];
    for (std::size_t c = 0; c < coverages.size(); ++c) {
      if (coverages[c] >= 1.0 || before < coverages[c])
        ++out[c].true_positives;
      else
        ++out[c].false_negatives;
    }
  }
  return out;
}

std::unique_ptr<TransitionTable> lattice_for(const NgramModel& model) {
  if (model.config().order == 2) return std::make_unique<TransitionTable>(model);
  return nullptr;
}

}  // namespace

TrialOutcome sensitivity_trial(const NgramModel& model, const Corpus& test, double coverage, std::uint64_t seed) {
  const double c[1] = {coverage};
  return sensitivity_trial(model, test, c, seed).front();
}

std::vector<TrialOutcome> sensitivity_trial(const NgramModel& model, const Corpus& test,
                                            std::span<const double> coverages, std::uint64_t seed) {
  const auto table = lattice_for(model);
  return run_trial(model, table.get(), test, coverages, seed);
}

SensitivityReport cross_validate(const Corpus& corpus, const CrossValidationConfig& config) {
  if (config.trials_per_fold < 1) throw DataError("trials per fold must be >= 1");
  if (!(config.coverage > 0.0 && config.coverage <= 1.0)) throw DataError("coverage must be in (0, 1]");
  const auto splits = kfold_split(corpus, config.folds, config.seed);

  SensitivityReport report;
  report.coverage = config.coverage;
  report.trials_per_fold = config.trials_per_fold;
  report.seed = config.seed;
  report.folds.resize(splits.size());

  auto run_fold = [&](std::size_t f) {
    ModelConfig mc = config.model;
    mc.vocabulary_size = corpus.vocabulary_size;
    const NgramModel model = NgramModel::train(splits[f].train, mc);
    const auto table = lattice_for(model);
    FoldSensitivity& fs = report.folds[f];
    fs.fold = static_cast<int>(f);
    fs.train_texts = splits[f].train.size();
    fs.test_texts = splits[f].test.size();
    const double cov[1] = {config.coverage};
    for (int t = 0; t < config.trials_per_fold; ++t) {
      const auto outcome =
          run_trial(model, table.get(), splits[f].test, cov, derive_seed(config.seed, f, static_cast<std::uint64_t>(t)))
              .front();
      if (outcome.evaluated() == 0) throw DataError("fold " + std::to_string(f) + " has no test text of length >= 2");
      fs.skipped_texts = outcome.skipped;
      fs.trial_sensitivities.push_back(outcome.sensitivity());
    }
    fs.trials = fs.trial_sensitivities.size();
    double sum = 0.0;
    for (double s : fs.trial_sensitivities) sum += s;
    fs.mean = sum / static_cast<double>(fs.trials);
    double ss = 0.0;
    for (double s : fs.trial_sensitivities) ss += (s - fs.mean) * (s - fs.mean);
    fs.stdev = fs.trials > 1 ? std::sqrt(ss / static_cast<double>(fs.trials - 1)) : 0.0;
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(splits.size())));
  if (workers == 1) {
    for (std::size_t f = 0; f < splits.size(); ++f) run_fold(f);
  } else {
    std::mutex mu;
    std::size_t next = 0;
    std::exception_ptr failure;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          std::size_t f;
          {
            std::lock_guard lock(mu);
            if (next >= splits.size() || failure) return;
            f = next++;
          }
          try {
            run_fold(f);
          } catch (...) {
            std::lock_guard lock(mu);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  double sum = 0.0;
  for (const auto& fs : report.folds) sum += fs.mean;
  report.overall_mean = sum / static_cast<double>(report.folds.size());
  return report;
}

namespace {

// Shortest text that reads back to the same double.
std::string num(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace

void write_sensitivity_summary(std::ostream& out, const SensitivityReport& report) {
  out << "fold\ttrials\ttrain_texts\ttest_texts\tskipped\tmean\tstdev\n";
  for (const auto& fs : report.folds) {
    out << fs.fold << '\t' << fs.trials << '\t' << fs.train_texts << '\t' << fs.test_texts << '\t'
        << fs.skipped_texts << '\t' << num(fs.mean) << '\t' << num(fs.stdev) << '\n';
  }
  out << "overall\t" << report.folds.size() * static_cast<std::size_t>(report.trials_per_fold) << "\t\t\t\t"
      << num(report.overall_mean) << "\t\n";
  out << "# coverage=" << num(report.coverage) << " trials_per_fold=" << report.trials_per_fold
      << " seed=" << report.seed << '\n';
}

void write_trial_sensitivities(std::ostream& out, const SensitivityReport& report) {
  out << "fold\ttrial\tsensitivity\n";
  for (const auto& fs : report.folds) {
    for (std::size_t t = 0; t < fs.trial_sensitivities.size(); ++t)
      out << fs.fold << '\t' << t << '\t' << num(fs.trial_sensitivities[t]) << '\n';
  }
}

}  // namespace signgram
