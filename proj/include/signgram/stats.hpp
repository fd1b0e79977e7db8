#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "signgram/corpus.hpp"

namespace signgram {

struct FrequencyTable {
  std::map<Sign, std::uint64_t> counts;
  std::uint64_t total = 0;

  double probability(Sign s) const;
  std::size_t distinct() const noexcept { return counts.size(); }
};

// Counts sign tokens only (no gaps, no boundaries). Throws DataError on an empty corpus.
FrequencyTable unigram_frequencies(const Corpus& corpus);

enum class TextPosition { beginner, ender };

// First (beginner) or last (ender) sign of every text. Length-1 texts count as both.
FrequencyTable positional_frequencies(const Corpus& corpus, TextPosition position);

struct RankedSign {
  std::size_t rank = 0;
  Sign sign;
  std::uint64_t frequency = 0;
};

// Descending frequency, ties by ascending sign id; ranks start at 1.
std::vector<RankedSign> rank_frequency(const FrequencyTable& table);

// Smallest k such that the k top-ranked signs cover at least `fraction` of the total.
std::size_t cumulative_coverage(const FrequencyTable& table, double fraction);

struct RankPoint {
  double rank = 0;
  double frequency = 0;
};

std::vector<RankPoint> rank_points(const std::vector<RankedSign>& ranked);

// Zipf-Mandelbrot law  ln f_r = a - b ln(r + c), fit in natural-log space.
struct ZipfFit {
  double a = 0;
  double b = 0;
  double c = 0;
  // Sum of squared errors of ln f_r.
  double residual = 0;
  int iterations = 0;
  // All frequencies equal: no rank dependence to fit, b is 0.
  bool degenerate = false;
};

// Inner closed-form least squares for (a, b) at fixed c, outer golden-section
// search on c in (-0.99, 10 K]. Requires >= 4 points with positive frequency.
ZipfFit fit_zipf_mandelbrot(std::span<const RankPoint> points);

}  // namespace signgram
