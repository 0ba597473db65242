#pragma once

// Binned samples and their reconstruction into point data.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <variant>
#include <vector>

#include "gofsim/error.hpp"
#include "gofsim/model.hpp"

namespace gofsim {

struct Histogram {
  std::vector<double> edges;         // k + 1 strictly increasing edges
  std::vector<std::size_t> counts;   // k counts

  std::size_t total() const { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }
};

// Raw observations or a histogram.
using Sample = std::variant<std::vector<double>, Histogram>;

inline std::size_t sample_size(const Sample& s) {
  if (const auto* raw = std::get_if<std::vector<double>>(&s)) return raw->size();
  return std::get<Histogram>(s).total();
}

inline void validate_histogram(const Histogram& h) {
  if (h.edges.size() < 2) throw invalid_input("histogram: need at least two edges");
  if (h.counts.size() + 1 != h.edges.size())
    throw invalid_input("histogram: need exactly one more edge than counts");
  for (std::size_t i = 1; i < h.edges.size(); ++i)
    if (!(h.edges[i - 1] < h.edges[i])) throw invalid_input("histogram: edges must be strictly increasing");
  if (h.total() == 0) throw invalid_input("histogram: zero total count");
}

// Counts data into bins (a, b]; the first bin is closed on the left. Values
// outside the edges are counted in the nearest end bin.
inline Histogram bin_data(std::span<const double> data, std::vector<double> edges) {
  Histogram h{std::move(edges), {}};
  const std::size_t k = h.edges.size() - 1;
  h.counts.assign(k, 0);
  for (double x : data) {
    auto it = std::lower_bound(h.edges.begin() + 1, h.edges.end() - 1, x);
    h.counts[static_cast<std::size_t>(it - (h.edges.begin() + 1))]++;
  }
  return h;
}

inline std::vector<double> equal_width_edges(double lo, double hi, std::size_t bins) {
  std::vector<double> edges(bins + 1);
  for (std::size_t j = 0; j <= bins; ++j)
    edges[j] = lo + (hi - lo) * (static_cast<double>(j) / static_cast<double>(bins));
  edges.back() = hi;
  return edges;
}

// Places the c observations of each bin deterministically: at the quantiles of
// the CDF mass fractions (j - 0.5)/c inside the bin when the model has a
// quantile function, otherwise at the equally spaced points a + (b - a)(j - 0.5)/c.
inline std::vector<double> spread_out(const Histogram& h, const NullModel& model) {
  validate_histogram(h);
  std::vector<double> out;
  out.reserve(h.total());
  for (std::size_t bin = 0; bin < h.counts.size(); ++bin) {
    const std::size_t c = h.counts[bin];
    if (c == 0) continue;
    const double a = h.edges[bin], b = h.edges[bin + 1];
    double fa = 0.0, fb = 0.0;
    const bool use_quantile = model.has_quantile() && ((fb = model.cdf(b)) - (fa = model.cdf(a))) > 1e-12;
    if (!use_quantile && !(std::isfinite(a) && std::isfinite(b)))
      throw invalid_input("histogram: cannot spread counts over an infinite bin without a quantile function");
    for (std::size_t j = 1; j <= c; ++j) {
      const double frac = (static_cast<double>(j) - 0.5) / static_cast<double>(c);
      double x = use_quantile ? model.quantile(fa + (fb - fa) * frac) : a + (b - a) * frac;
      out.push_back(std::clamp(x, a, b));
    }
  }
  return out;
}

// spread_out with the model's parameters fitted to the spread data when
// estimation is enabled: spread with the current parameters, fit, spread again.
inline std::vector<double> unbin(const Histogram& h, const NullModel& model) {
  auto points = spread_out(h, model);
  if (!model.estimates_params()) return points;
  return spread_out(h, model.fitted(points));
}

inline std::vector<double> to_points(const Sample& s, const NullModel& model) {
  if (const auto* raw = std::get_if<std::vector<double>>(&s)) return *raw;
  return unbin(std::get<Histogram>(s), model);
}

}  // namespace gofsim
