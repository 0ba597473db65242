#pragma once

// Simultaneous testing with a simulation-adjusted minimum p-value.
//
// Every enabled statistic is computed on B samples drawn from the (fitted)
// null model. Each simulated row yields one p-value per method; the minimum
// over methods is not uniform, so the empirical CDF of the simulated minima
// is used to transform the observed minimum p-value back to the uniform
// scale. The transformed value is reported as "RC".

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "gofsim/error.hpp"
#include "gofsim/histogram.hpp"
#include "gofsim/model.hpp"
#include "gofsim/parallel.hpp"
#include "gofsim/rng.hpp"
#include "gofsim/statistics.hpp"

namespace gofsim {

inline constexpr std::size_t kDefaultReplicates = 1000;
inline constexpr std::size_t kMinReplicates = 100;
inline constexpr std::size_t kCurvePoints = 250;
inline constexpr double kMaxRowFailureRate = 0.01;
inline constexpr int kRowAttempts = 5;

// B x M matrix of simulated null statistics, row-major.
struct NullTable {
  std::vector<MethodId> methods;
  std::size_t rows = 0;
  std::vector<double> values;
  std::vector<std::size_t> sample_sizes;  // per row
  std::size_t failed_attempts = 0;

  std::size_t cols() const { return methods.size(); }
  double at(std::size_t r, std::size_t k) const { return values[r * cols() + k]; }
  std::span<const double> row(std::size_t r) const { return {values.data() + r * cols(), cols()}; }
  std::vector<double> column(std::size_t k) const {
    std::vector<double> c(rows);
    for (std::size_t r = 0; r < rows; ++r) c[r] = at(r, k);
    return c;
  }
};

struct SimulationOptions {
  std::size_t B = kDefaultReplicates;
  std::size_t n = 0;
  std::optional<double> lambda;                       // sample size ~ Poisson(lambda) per row
  std::optional<std::vector<double>> histogram_edges; // bin and re-spread each row like the data
  std::uint64_t seed = 0;
  unsigned threads = 0;
  StreamTag stream = StreamTag::NullTable;
};

// Row r draws from RngStream(seed).split(stream, r); a failed row retries on
// further sub-streams. More than 1% failed attempts aborts the simulation.
inline NullTable simulate_null_table(const NullModel& model, const StatConfig& config, const SimulationOptions& opt) {
  if (opt.B < kMinReplicates) throw invalid_input("B must be at least " + std::to_string(kMinReplicates));
  if (!opt.lambda && opt.n < 3) throw invalid_input("sample size must be at least 3");
  if (opt.lambda && !(*opt.lambda > 0.0)) throw invalid_input("lambda must be positive");
  if (config.methods.empty()) throw invalid_input("no methods enabled");

  NullTable t;
  t.methods = config.methods;
  t.rows = opt.B;
  t.values.assign(opt.B * t.methods.size(), 0.0);
  t.sample_sizes.assign(opt.B, 0);
  std::vector<int> failures(opt.B, 0);
  std::vector<std::string> last_error(opt.B);
  const RngStream master(opt.seed);

  parallel_for(opt.B, opt.threads, [&](std::size_t r) {
    RngStream row_stream = master.split(opt.stream, r);
    for (int attempt = 0; attempt < kRowAttempts; ++attempt) {
      RngStream rng = row_stream.split(static_cast<std::uint64_t>(attempt));
      std::size_t n = opt.n;
      if (opt.lambda) {
        std::poisson_distribution<std::size_t> pois(*opt.lambda);
        n = pois(rng);
      }
      try {
        if (n < 3) throw invalid_input("simulated sample size below 3");
        std::vector<double> x = model.sample(n, rng);
        if (opt.histogram_edges) x = unbin(bin_data(x, *opt.histogram_edges), model);
        std::sort(x.begin(), x.end());
        const NullModel fitted = model.fitted(x);
        evaluate_statistics(x, fitted, t.methods, config,
                            std::span<double>(t.values.data() + r * t.cols(), t.cols()));
        t.sample_sizes[r] = n;
        return;
      } catch (const Error& e) {
        failures[r]++;
        last_error[r] = e.what();
      }
    }
  });

  std::size_t total = 0;
  std::string example;
  for (std::size_t r = 0; r < opt.B; ++r) {
    total += static_cast<std::size_t>(failures[r]);
    if (failures[r] > 0 && example.empty()) example = last_error[r];
    if (failures[r] >= kRowAttempts)
      throw estimation_error("null simulation row " + std::to_string(r) + " failed " +
                             std::to_string(kRowAttempts) + " times: " + last_error[r]);
  }
  if (static_cast<double>(total) > kMaxRowFailureRate * static_cast<double>(opt.B))
    throw estimation_error(std::to_string(total) + " failed null simulations out of " + std::to_string(opt.B) +
                           " rows (limit 1%); e.g. " + example);
  t.failed_attempts = total;
  return t;
}

// The table's columns, sorted, for counting exceedances.
class SortedColumns {
 public:
  explicit SortedColumns(const NullTable& t) : rows_(t.rows), cols_(t.cols()) {
    sorted_.reserve(cols_);
    for (std::size_t k = 0; k < cols_; ++k) {
      auto c = t.column(k);
      std::sort(c.begin(), c.end());
      sorted_.push_back(std::move(c));
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  // Number of table rows whose value in column k is strictly greater than v.
  std::size_t count_greater(std::size_t k, double v) const {
    const auto& c = sorted_[k];
    return static_cast<std::size_t>(c.end() - std::upper_bound(c.begin(), c.end(), v));
  }

  // p-values (# rows strictly greater) / B for one vector of statistics.
  std::vector<double> pvalues(std::span<const double> stats) const {
    std::vector<double> p(cols_);
    for (std::size_t k = 0; k < cols_; ++k)
      p[k] = static_cast<double>(count_greater(k, stats[k])) / static_cast<double>(rows_);
    return p;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<std::vector<double>> sorted_;
};

inline std::map<MethodId, double> per_method_pvalues(const StatVector& observed, const NullTable& table) {
  if (observed.methods != table.methods) throw invalid_input("statistic methods do not match the null table");
  const SortedColumns cols(table);
  const auto p = cols.pvalues(observed.values);
  std::map<MethodId, double> out;
  for (std::size_t k = 0; k < p.size(); ++k) out[observed.methods[k]] = p[k];
  return out;
}

// Empirical CDF of simulated minimum p-values on 250 equally spaced points of
// [0, 1], evaluated by linear interpolation and clamped outside the grid.
class AdjustmentCurve {
 public:
  AdjustmentCurve() = default;

  static AdjustmentCurve from_minima(std::vector<double> minima) {
    if (minima.empty()) throw invalid_input("adjustment curve: no simulated minima");
    std::sort(minima.begin(), minima.end());
    AdjustmentCurve c;
    c.grid_.resize(kCurvePoints);
    c.cdf_.resize(kCurvePoints);
    for (std::size_t i = 0; i < kCurvePoints; ++i) {
      const double x = static_cast<double>(i) / static_cast<double>(kCurvePoints - 1);
      c.grid_[i] = x;
      const auto below = std::upper_bound(minima.begin(), minima.end(), x) - minima.begin();
      c.cdf_[i] = static_cast<double>(below) / static_cast<double>(minima.size());
    }
    c.minima_ = std::move(minima);
    return c;
  }

  double operator()(double p) const {
    if (p <= grid_.front()) return cdf_.front();
    if (p >= grid_.back()) return cdf_.back();
    const double pos = p * static_cast<double>(kCurvePoints - 1);
    const auto i = std::min(static_cast<std::size_t>(pos), kCurvePoints - 2);
    const double w = (p - grid_[i]) / (grid_[i + 1] - grid_[i]);
    return cdf_[i] + w * (cdf_[i + 1] - cdf_[i]);
  }

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& cdf_values() const { return cdf_; }
  // Sorted simulated minima the curve was built from.
  const std::vector<double>& minima() const { return minima_; }

 private:
  std::vector<double> grid_, cdf_, minima_;
};

// Min-p per table row, each row compared with the other B - 1 rows.
inline std::vector<double> row_minimum_pvalues(const NullTable& table, const SortedColumns& cols) {
  if (table.rows < 2) throw invalid_input("null table needs at least 2 rows");
  std::vector<double> minima(table.rows);
  const double denom = static_cast<double>(table.rows - 1);
  for (std::size_t r = 0; r < table.rows; ++r) {
    double m = 1.0;
    for (std::size_t k = 0; k < table.cols(); ++k)
      m = std::min(m, static_cast<double>(cols.count_greater(k, table.at(r, k))) / denom);
    minima[r] = m;
  }
  return minima;
}

inline AdjustmentCurve build_adjustment_curve(const NullTable& table) {
  return AdjustmentCurve::from_minima(row_minimum_pvalues(table, SortedColumns(table)));
}

// Curve from a separate batch of simulated rows, each compared with the whole reference table.
inline AdjustmentCurve build_adjustment_curve(const NullTable& reference, const NullTable& batch) {
  if (reference.methods != batch.methods) throw invalid_input("min-p batch methods do not match the null table");
  const SortedColumns cols(reference);
  std::vector<double> minima(batch.rows);
  for (std::size_t r = 0; r < batch.rows; ++r) {
    const auto p = cols.pvalues(batch.row(r));
    minima[r] = *std::min_element(p.begin(), p.end());
  }
  return AdjustmentCurve::from_minima(std::move(minima));
}

// A finished null simulation: table, sorted columns and adjustment curve.
struct NullReference {
  NullTable table;
  SortedColumns columns;
  AdjustmentCurve curve;

  explicit NullReference(NullTable t)
      : table(std::move(t)), columns(table), curve(AdjustmentCurve::from_minima(row_minimum_pvalues(table, columns))) {}
  NullReference(NullTable t, const NullTable& batch)
      : table(std::move(t)), columns(table), curve(build_adjustment_curve(table, batch)) {}

  std::vector<double> pvalues(std::span<const double> stats) const { return columns.pvalues(stats); }
  double rc(std::span<const double> pvals) const {
    return curve(*std::min_element(pvals.begin(), pvals.end()));
  }
};

struct RunOptions {
  std::size_t B = kDefaultReplicates;
  std::uint64_t seed = 0;
  std::optional<double> lambda;
  unsigned threads = 0;
  bool fresh_minp_batch = false;
  // Histogram input: bin and re-spread every simulated row with the data's
  // edges. Off by default, so a histogram and its spread-out points give the
  // same report.
  bool bin_null_rows = false;
};

struct TestReport {
  double rc = 1.0;
  double min_p = 1.0;
  std::map<MethodId, double> pvalues;
  std::map<MethodId, double> statistics;
  std::vector<MethodId> dropped;  // requested but not applicable
  std::size_t B = 0;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::optional<double> lambda;
  std::string family;
  std::vector<double> params;  // parameters the table was simulated from
  bool estimated = false;
  std::size_t nbins = kDefaultBinCount;
  bool fresh_minp_batch = false;
  bool bin_null_rows = false;
};

inline TestReport run_test(const Sample& sample, const NullModel& model, const StatConfig& config,
                           const RunOptions& opt) {
  TestReport report;
  report.B = opt.B;
  report.seed = opt.seed;
  report.lambda = opt.lambda;
  report.family = std::string(model.family());
  report.estimated = model.estimates_params();
  report.nbins = config.nbins;
  report.fresh_minp_batch = opt.fresh_minp_batch;
  report.bin_null_rows = opt.bin_null_rows;

  // Step 1: un-bin, sort and fit.
  std::vector<double> x = with_stage("prepare", [&] { return to_points(sample, model); });
  if (x.empty()) throw invalid_input("prepare: empty sample");
  std::sort(x.begin(), x.end());
  report.n = x.size();
  const NullModel fitted = with_stage("estimate", [&] { return model.fitted(x); });
  report.params.assign(fitted.params().begin(), fitted.params().end());

  StatConfig cfg = config;
  const std::size_t typical_n = opt.lambda ? static_cast<std::size_t>(std::llround(*opt.lambda)) : x.size();
  cfg.methods = resolve_methods(config.methods, fitted, typical_n, &report.dropped);
  if (cfg.methods.empty()) throw invalid_input("configure: no applicable methods");

  // Step 2: null distribution of every statistic.
  SimulationOptions sim;
  sim.B = opt.B;
  sim.n = x.size();
  sim.lambda = opt.lambda;
  sim.seed = opt.seed;
  sim.threads = opt.threads;
  if (const auto* h = std::get_if<Histogram>(&sample); h && opt.bin_null_rows) sim.histogram_edges = h->edges;
  NullTable table = with_stage("simulate", [&] { return simulate_null_table(fitted, cfg, sim); });

  // Steps 3-4: distribution of the minimum p-value.
  std::optional<NullReference> ref;
  with_stage("adjust", [&] {
    if (opt.fresh_minp_batch) {
      SimulationOptions second = sim;
      second.stream = StreamTag::MinpBatch;
      ref.emplace(std::move(table), simulate_null_table(fitted, cfg, second));
    } else {
      ref.emplace(std::move(table));
    }
  });

  // Step 5: the observed data.
  std::vector<double> stats(cfg.methods.size());
  with_stage("statistics", [&] { evaluate_statistics(x, fitted, cfg.methods, cfg, stats); });
  const auto p = ref->pvalues(stats);
  for (std::size_t k = 0; k < cfg.methods.size(); ++k) {
    report.pvalues[cfg.methods[k]] = p[k];
    report.statistics[cfg.methods[k]] = stats[k];
  }
  report.min_p = *std::min_element(p.begin(), p.end());
  report.rc = ref->curve(report.min_p);
  return report;
}

}  // namespace gofsim
