#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "signgram/corpus.hpp"
#include "signgram/ngram.hpp"
#include "signgram/restore.hpp"

namespace signgram {

struct FoldSplit {
  Corpus train;
  Corpus test;
};

// Shuffles the texts with `seed` and cuts them into k parts whose sizes
// differ by at most one. Split i tests on part i and trains on the rest.
std::vector<FoldSplit> kfold_split(const Corpus& corpus, int k, std::uint64_t seed);

struct TrialOutcome {
  std::size_t true_positives = 0;
  std::size_t false_negatives = 0;
  std::size_t skipped = 0;  // texts shorter than 2 signs

  std::size_t evaluated() const noexcept { return true_positives + false_negatives; }
  // TP / (TP + FN); NaN when nothing was evaluated.
  double sensitivity() const noexcept;
};

// Drops one uniformly chosen sign from each test text of length >= 2 and
// checks whether it lands in the coverage set of the gap posterior.
// Order-2 models use the lattice posterior; higher orders enumerate.
TrialOutcome sensitivity_trial(const NgramModel& model, const Corpus& test, double coverage,
                               std::uint64_t seed);

// Same drop positions scored at several coverage levels at once.
std::vector<TrialOutcome> sensitivity_trial(const NgramModel& model, const Corpus& test,
                                            std::span<const double> coverages, std::uint64_t seed);

struct CrossValidationConfig {
  int folds = 5;
  double coverage = 0.90;
  int trials_per_fold = 100;
  std::uint64_t seed = 0;
  ModelConfig model{};
  // Worker threads over folds; results do not depend on it.
  unsigned threads = 1;
};

struct FoldSensitivity {
  int fold = 0;
  std::size_t trials = 0;
  double mean = 0;
  double stdev = 0;  // sample standard deviation over trials
  std::size_t train_texts = 0;
  std::size_t test_texts = 0;
  std::size_t skipped_texts = 0;
  std::vector<double> trial_sensitivities;
};

struct SensitivityReport {
  std::vector<FoldSensitivity> folds;
  double overall_mean = 0;  // mean of fold means
  double coverage = 0.90;
  int trials_per_fold = 100;
  std::uint64_t seed = 0;
};

SensitivityReport cross_validate(const Corpus& corpus, const CrossValidationConfig& config);

// Summary table: fold, trials, mean, stdev, then an "overall" row.
void write_sensitivity_summary(std::ostream& out, const SensitivityReport& report);
// One row per trial: fold, trial, sensitivity.
void write_trial_sensitivities(std::ostream& out, const SensitivityReport& report);

}  // namespace signgram
