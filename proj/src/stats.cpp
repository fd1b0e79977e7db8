#include "signgram/stats.hpp"

#include <algorithm>
#include <cmath>

#include "signgram/error.hpp"

namespace signgram {

double FrequencyTable::probability(Sign s) const {
  if (total == 0) return 0.0;
  const auto it = counts.find(s);
  return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(total);
}

FrequencyTable unigram_frequencies(const Corpus& corpus) {
  if (corpus.empty()) throw DataError("unigram frequencies of an empty corpus");
  FrequencyTable table;
  for (const Text& text : corpus.texts) {
    for (const Token& t : text.tokens) {
      if (t.is_gap()) continue;
      ++table.counts[t.sign()];
      ++table.total;
    }
  }
  return table;
}

FrequencyTable positional_frequencies(const Corpus& corpus, TextPosition position) {
  FrequencyTable table;
  for (const Text& text : corpus.texts) {
    if (text.tokens.empty()) continue;
    const Token& t = position == TextPosition::beginner ? text.tokens.front() : text.tokens.back();
    if (t.is_gap()) throw DataError("positional frequencies require undamaged texts");
    ++table.counts[t.sign()];
    ++table.total;
  }
  return table;
}

std::vector<RankedSign> rank_frequency(const FrequencyTable& table) {
  std::vector<RankedSign> ranked;
  ranked.reserve(table.counts.size());
  for (const auto& [sign, count] : table.counts) ranked.push_back({0, sign, count});
  // counts is ordered by sign id, so a stable sort on frequency keeps id order within ties.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const RankedSign& x, const RankedSign& y) { return x.frequency > y.frequency; });
  for (std::size_t i = 0; i < ranked.size(); ++i) ranked[i].rank = i + 1;
  return ranked;
}

std::size_t cumulative_coverage(const FrequencyTable& table, double fraction) {
  if (table.total == 0) throw DataError("coverage of an empty frequency table");
  if (!(fraction > 0.0 && fraction <= 1.0)) throw DataError("coverage fraction must be in (0, 1]");
  const double total = static_cast<double>(table.total);
  const double target = fraction * total - 1e-9 * total;
  std::uint64_t cumulative = 0;
  std::size_t k = 0;
  for (const RankedSign& r : rank_frequency(table)) {
    cumulative += r.frequency;
    ++k;
    if (static_cast<double>(cumulative) >= target) return k;
  }
  return k;
}

std::vector<RankPoint> rank_points(const std::vector<RankedSign>& ranked) {
  std::vector<RankPoint> points;
  points.reserve(ranked.size());
  for (const RankedSign& r : ranked)
    points.push_back({static_cast<double>(r.rank), static_cast<double>(r.frequency)});
  return points;
}

namespace {

struct LinearFit {
  double a = 0;
  double b = 0;
  double residual = 0;
};

LinearFit fit_at(std::span<const RankPoint> points, double c) {
  const double n = static_cast<double>(points.size());
  double mx = 0, my = 0;
  for (const RankPoint& p : points) {
    mx += std::log(p.rank + c);
    my += std::log(p.frequency);
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (const RankPoint& p : points) {
    const double dx = std::log(p.rank + c) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(p.frequency) - my);
  }
  LinearFit fit;
  fit.b = -sxy / sxx;
  fit.a = my + fit.b * mx;
  for (const RankPoint& p : points) {
    const double e = std::log(p.frequency) - (fit.a - fit.b * std::log(p.rank + c));
    fit.residual += e * e;
  }
  return fit;
}

}  // namespace

ZipfFit fit_zipf_mandelbrot(std::span<const RankPoint> points) {
  if (points.size() < 4) throw DataError("Zipf-Mandelbrot fit needs at least 4 points");
  double min_rank = points.front().rank;
  double max_rank = points.front().rank;
  for (const RankPoint& p : points) {
    if (!(p.frequency > 0.0)) throw DataError("Zipf-Mandelbrot fit needs positive frequencies");
    if (!(p.rank >= 1.0)) throw DataError("ranks start at 1");
    min_rank = std::min(min_rank, p.rank);
    max_rank = std::max(max_rank, p.rank);
  }
  if (min_rank == max_rank) throw DataError("Zipf-Mandelbrot fit needs distinct ranks");

  const double first = std::log(points.front().frequency);
  const bool flat = std::all_of(points.begin(), points.end(), [&](const RankPoint& p) {
    return std::log(p.frequency) == first;
  });
  if (flat) {
    ZipfFit fit;
    fit.a = first;
    fit.degenerate = true;
    return fit;
  }

  const double c_lo = -0.99;
  const double c_hi = 10.0 * static_cast<double>(points.size());

  // Coarse scan to bracket the minimum, denser near the lower bound where the
  // residual changes fastest; golden-section refinement inside the bracket.
  constexpr int kGrid = 400;
  std::vector<double> grid(kGrid + 1);
  for (int j = 0; j <= kGrid; ++j) {
    const double t = static_cast<double>(j) / kGrid;
    grid[j] = c_lo + (c_hi - c_lo) * t * t * t;
  }
  int best = 0;
  double best_residual = fit_at(points, grid[0]).residual;
  for (int j = 1; j <= kGrid; ++j) {
    const double r = fit_at(points, grid[j]).residual;
    if (r < best_residual) {
      best_residual = r;
      best = j;
    }
  }
  double lo = grid[std::max(0, best - 1)];
  double hi = grid[std::min(kGrid, best + 1)];

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = fit_at(points, x1).residual;
  double f2 = fit_at(points, x2).residual;
  int iterations = 0;
  while (hi - lo >= 1e-6 && iterations < 500) {
    ++iterations;
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = fit_at(points, x1).residual;
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = fit_at(points, x2).residual;
    }
  }

  ZipfFit fit;
  fit.c = 0.5 * (lo + hi);
  const LinearFit inner = fit_at(points, fit.c);
  fit.a = inner.a;
  fit.b = inner.b;
  fit.residual = inner.residual;
  fit.iterations = iterations;
  return fit;
}

}  // namespace signgram
