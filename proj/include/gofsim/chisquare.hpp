#pragma once

// Chi-square goodness-of-fit with kappa-blended bin edges.
//
// Edges are a blend of equal-probability edges (kappa = 0) and equal-width
// edges (kappa = 1) over the data range, after which bins with small
// expected counts are merged into a neighbour until every expected count
// exceeds 5.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "gofsim/error.hpp"
#include "gofsim/model.hpp"

namespace gofsim {

enum class BinningVariant { RGd, EqualSize, EqualProb };

inline constexpr std::size_t kDefaultBinCount = 10;
inline constexpr double kMinExpectedCount = 5.0;

struct BinningSpec {
  BinningVariant variant;
  std::size_t k;
  double kappa;
};

// RGd uses k = 5 + m bins and kappa = 1/2; the other two variants take their
// bin count from nbins.
inline BinningSpec binning_spec(BinningVariant variant, std::size_t estimated_count,
                                std::size_t nbins = kDefaultBinCount) {
  if (nbins < 2 && variant != BinningVariant::RGd) throw invalid_input("chi-square: nbins must be at least 2");
  switch (variant) {
    case BinningVariant::RGd: return {variant, 5 + estimated_count, 0.5};
    case BinningVariant::EqualSize: return {variant, nbins, 1.0};
    case BinningVariant::EqualProb: return {variant, nbins, 0.0};
  }
  return {variant, nbins, 0.0};
}

struct BinSet {
  std::vector<double> edges;

  std::size_t bins() const { return edges.size() - 1; }
};

inline std::vector<double> expected_counts(const NullModel& model, std::span<const double> edges, double n) {
  std::vector<double> e(edges.size() - 1);
  double prev = model.cdf(edges[0]);
  for (std::size_t i = 1; i < edges.size(); ++i) {
    double cur = model.cdf(edges[i]);
    e[i - 1] = n * (cur - prev);
    prev = cur;
  }
  return e;
}

// Equal-probability edges over the data range [lo, hi].
inline std::vector<double> equal_probability_edges(const NullModel& model, double lo, double hi, std::size_t k) {
  std::vector<double> edges(k + 1);
  edges[0] = lo;
  for (std::size_t j = 1; j < k; ++j) edges[j] = model.quantile(static_cast<double>(j) / static_cast<double>(k));
  edges[k] = hi;
  return edges;
}

// Equal-width edges over [lo, hi]. An infinite end is replaced by the model
// quantile at 5/n (or 1 - 5/n) and the outermost bin is left unbounded.
inline std::vector<double> equal_size_edges(const NullModel& model, double lo, double hi, std::size_t k,
                                            std::size_t n) {
  auto grid = [](double a, double b, std::size_t points) {
    std::vector<double> g(points);
    for (std::size_t j = 0; j < points; ++j)
      g[j] = a + (b - a) * (static_cast<double>(j) / static_cast<double>(points - 1));
    g.back() = b;
    return g;
  };
  if (k == 2) return {lo, model.quantile(0.5), hi};
  const double tail = 5.0 / static_cast<double>(n);
  const bool finite_lo = std::isfinite(lo), finite_hi = std::isfinite(hi);
  if (finite_lo && finite_hi) return grid(lo, hi, k + 1);
  if (finite_lo) {
    auto g = grid(lo, model.quantile(1.0 - tail), k);
    g.push_back(INFINITY);
    return g;
  }
  if (finite_hi) {
    auto g = grid(model.quantile(tail), hi, k);
    g.insert(g.begin(), -INFINITY);
    return g;
  }
  auto g = grid(model.quantile(tail), model.quantile(1.0 - tail), k - 1);
  g.insert(g.begin(), -INFINITY);
  g.push_back(INFINITY);
  return g;
}

// Merges the bin with the smallest expected count into its smaller neighbour
// (end bins merge inward, ties go right) until all expected counts exceed 5.
inline BinSet merge_small_bins(const NullModel& model, std::vector<double> edges, std::size_t n) {
  if (edges.size() < 3) throw invalid_input("chi-square: need at least two bins to merge");
  if (static_cast<double>(n) <= kMinExpectedCount)
    throw invalid_input("chi-square: total expected count n <= 5, cannot form bins");
  auto e = expected_counts(model, edges, static_cast<double>(n));
  auto all_large = [&] {
    return std::all_of(e.begin(), e.end(), [](double v) { return v > kMinExpectedCount; });
  };
  while (!all_large()) {
    const std::size_t nb = e.size();
    if (nb == 1) throw invalid_input("chi-square: expected count in the data range is at most 5");
    const std::size_t k = static_cast<std::size_t>(std::min_element(e.begin(), e.end()) - e.begin());
    std::size_t drop;  // index into e of the bin absorbed into its left neighbour
    if (k == 0) drop = 1;
    else if (k == nb - 1) drop = nb - 1;
    else drop = e[k - 1] < e[k + 1] ? k : k + 1;
    e[drop - 1] += e[drop];
    e.erase(e.begin() + static_cast<std::ptrdiff_t>(drop));
    edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(drop));
  }
  return {std::move(edges)};
}

// Bin edges for sorted data. The model must already carry the parameters to test against.
inline BinSet build_bins(const NullModel& model, std::span<const double> sorted, const BinningSpec& spec) {
  if (sorted.empty()) throw invalid_input("chi-square: empty data");
  if (!model.has_quantile()) throw invalid_input("chi-square: model has no quantile function");
  if (spec.k < 2) throw invalid_input("chi-square: need at least two bins");
  const double lo = sorted.front(), hi = sorted.back();
  const auto prob = equal_probability_edges(model, lo, hi, spec.k);
  const auto size = equal_size_edges(model, lo, hi, spec.k, sorted.size());
  std::vector<double> blended(spec.k + 1);
  for (std::size_t j = 0; j <= spec.k; ++j) {
    double v = prob[j] + spec.kappa * (size[j] - prob[j]);
    if (std::isnan(v) && j == 0) v = -INFINITY;
    if (std::isnan(v) && j == spec.k) v = INFINITY;
    blended[j] = v;
  }
  // Interior edges that fall outside the data range or out of order would make
  // empty or negative bins; drop them.
  std::vector<double> edges{blended.front()};
  for (std::size_t j = 1; j < spec.k; ++j)
    if (blended[j] > edges.back() && blended[j] < blended.back()) edges.push_back(blended[j]);
  edges.push_back(blended.back());
  if (edges.size() < 3) {
    // Data range too narrow for any interior edge: a single bin.
    return {std::move(edges)};
  }
  return merge_small_bins(model, std::move(edges), sorted.size());
}

// Counts per bin (a, b] with the outer edges replaced by -inf and +inf.
inline std::vector<double> observed_counts(std::span<const double> sorted, std::span<const double> edges) {
  std::vector<double> o(edges.size() - 1);
  std::size_t below = 0;
  for (std::size_t i = 1; i + 1 < edges.size(); ++i) {
    auto upto = static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), edges[i]) - sorted.begin());
    o[i - 1] = static_cast<double>(upto - below);
    below = upto;
  }
  o.back() = static_cast<double>(sorted.size() - below);
  return o;
}

inline double chisq_from_counts(std::span<const double> observed, std::span<const double> expected) {
  double s = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (!(expected[i] > 0.0)) throw invalid_input("chi-square: zero expected count");
    const double d = observed[i] - expected[i];
    s += d * d / expected[i];
  }
  return s;
}

// Chi-square statistic for sorted data against a model whose parameters are final.
inline double chisq_fitted(std::span<const double> sorted, const NullModel& fitted, const BinningSpec& spec) {
  auto bins = build_bins(fitted, sorted, spec);
  std::vector<double> open = bins.edges;
  open.front() = -INFINITY;
  open.back() = INFINITY;
  auto o = observed_counts(sorted, open);
  auto e = expected_counts(fitted, open, static_cast<double>(sorted.size()));
  return chisq_from_counts(o, e);
}

// Chi-square statistic for raw data; parameters are re-estimated when the model estimates.
inline double chisq_stat(std::span<const double> data, const NullModel& model, const BinningSpec& spec) {
  std::vector<double> sorted(data.begin(), data.end());
  std::sort(sorted.begin(), sorted.end());
  return chisq_fitted(sorted, model.fitted(sorted), spec);
}

}  // namespace gofsim
