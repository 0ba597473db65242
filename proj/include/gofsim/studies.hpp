#pragma once

// Simulation studies: type I error, power sweeps, method rankings and the
// pairwise-comparison illustration of the min-p adjustment.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "gofsim/adjust.hpp"
#include "gofsim/alternatives.hpp"
#include "gofsim/error.hpp"
#include "gofsim/histogram.hpp"
#include "gofsim/model.hpp"
#include "gofsim/parallel.hpp"
#include "gofsim/rng.hpp"
#include "gofsim/statistics.hpp"

namespace gofsim {

inline constexpr std::size_t kMinType1Reps = 200;
inline const std::string kRcName = "RC";

// KS distance between the empirical distribution of values and U[0, 1].
inline double uniformity_distance(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return ks(values);
}

// --- Type I error -------------------------------------------------------------

struct Type1Cell {
  std::string label;
  NullModel model;  // data are drawn from the model's parameters
  std::size_t n;
};

struct Type1Options {
  std::vector<double> alphas{0.01, 0.05, 0.10};
  std::size_t B = kDefaultReplicates;
  std::size_t reps = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  StatConfig config;
};

struct Type1Row {
  std::string label;
  std::string family;
  bool estimated = false;
  std::size_t n = 0;
  std::vector<double> rejection;  // per alpha
  std::vector<double> rc_values;  // one per replication
};

// Fraction of replications with rc <= alpha, each replication a full
// simulated test on fresh null data.
inline std::vector<Type1Row> type1_study(const std::vector<Type1Cell>& cells, const Type1Options& opt) {
  if (opt.reps < kMinType1Reps) throw invalid_input("type1: need at least 200 replications");
  for (double a : opt.alphas)
    if (!(a > 0.0 && a <= 1.0)) throw invalid_input("type1: alpha must lie in (0, 1]");
  const RngStream master(opt.seed);
  std::vector<Type1Row> out;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto& cell = cells[c];
    Type1Row row{cell.label, std::string(cell.model.family()), cell.model.estimates_params(), cell.n,
                 std::vector<double>(opt.alphas.size(), 0.0), std::vector<double>(opt.reps, 0.0)};
    const RngStream cell_stream = master.split(StreamTag::Cell, c);
    parallel_for(opt.reps, opt.threads, [&](std::size_t r) {
      RngStream rng = cell_stream.split(StreamTag::Replicate, r);
      Sample data = cell.model.sample(cell.n, rng);
      RunOptions run;
      run.B = opt.B;
      run.seed = rng();
      run.threads = 1;
      row.rc_values[r] = run_test(data, cell.model, opt.config, run).rc;
    });
    for (std::size_t a = 0; a < opt.alphas.size(); ++a) {
      auto hits = std::count_if(row.rc_values.begin(), row.rc_values.end(),
                                [&](double p) { return p <= opt.alphas[a]; });
      row.rejection[a] = static_cast<double>(hits) / static_cast<double>(opt.reps);
    }
    out.push_back(std::move(row));
  }
  return out;
}

// The default type I error grid: seven null hypotheses at n = 100, 500, 1000.
inline std::vector<Type1Cell> default_type1_cells() {
  struct Spec {
    const char* label;
    const char* family;
    std::vector<double> params;
    bool estimate;
  };
  const std::vector<Spec> specs{
      {"Normal", "normal", {0.0, 1.0}, false},      {"Normal", "normal", {0.0, 1.0}, true},
      {"Uniform", "uniform", {0.0, 1.0}, false},    {"Exponential", "exponential", {1.0}, false},
      {"Exponential", "exponential", {1.0}, true},  {"Beta", "beta", {2.0, 2.0}, false},
      {"Gamma", "gamma", {2.0, 1.0}, false},
  };
  std::vector<Type1Cell> cells;
  for (const auto& s : specs)
    for (std::size_t n : {100, 500, 1000})
      cells.push_back({s.label, make_null_model(s.family, s.params, s.estimate), n});
  return cells;
}

// --- Power ----------------------------------------------------------------------

struct SweepSpec {
  std::string family;          // alternative family name
  std::vector<double> params;  // template parameters
  std::size_t vary = 0;        // index of the swept parameter
  std::vector<double> grid;

  AlternativeSpec at(std::size_t g) const {
    auto p = params;
    if (vary >= p.size()) throw invalid_input("sweep: swept parameter index out of range");
    p[vary] = grid[g];
    return make_alternative(family, std::move(p));
  }
};

struct BinnedSpec {
  std::size_t bins = 50;
  std::optional<std::pair<double, double>> range;  // default: null quantiles 0.001 and 0.999
  bool bin_null_rows = false;                      // bin the null table's rows like the data
};

struct PowerCase {
  std::string name;
  NullModel null;
  SweepSpec sweep;
  std::size_t n = 1000;
  std::optional<double> lambda;
  std::optional<BinnedSpec> binned;
  StatConfig config;
};

struct PowerOptions {
  std::size_t B_null = kDefaultReplicates;
  std::size_t reps = 1000;
  std::vector<double> alphas{0.05};
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

struct PowerResult {
  std::string name;
  std::vector<std::string> methods;  // "RC" first, then the individual methods
  std::vector<double> grid;
  std::vector<double> alphas;
  std::vector<std::vector<std::vector<double>>> power;  // [alpha][grid][method]
  std::size_t reps = 0;
  std::size_t failed_reps = 0;

  std::size_t method_index(const std::string& m) const {
    auto it = std::find(methods.begin(), methods.end(), m);
    if (it == methods.end()) throw invalid_input("power result: no method " + m);
    return static_cast<std::size_t>(it - methods.begin());
  }
  double at(const std::string& method, std::size_t g, std::size_t a = 0) const {
    return power[a][g][method_index(method)];
  }
};

inline std::vector<double> histogram_edges_for(const PowerCase& pc) {
  const auto& b = *pc.binned;
  if (b.bins < 1) throw invalid_input("binned: need at least one bin");
  double lo, hi;
  if (b.range) {
    std::tie(lo, hi) = *b.range;
  } else {
    if (!pc.null.has_quantile()) throw invalid_input("binned: range required when the null has no quantile");
    lo = pc.null.quantile(0.001);
    hi = pc.null.quantile(0.999);
  }
  if (!(lo < hi)) throw invalid_input("binned: need lo < hi");
  return equal_width_edges(lo, hi, b.bins);
}

// One null table per case (simulated from the null's stated parameters, with
// per-row re-estimation when enabled) serves every grid point and replication.
// An individual method rejects when its own simulated p-value is <= alpha; RC
// rejects when the adjusted minimum p-value is.
inline PowerResult power_study(const PowerCase& pc, const PowerOptions& opt, std::uint64_t case_index = 0) {
  if (pc.sweep.grid.empty()) throw invalid_input("power: empty parameter grid");
  if (opt.reps < 1) throw invalid_input("power: need at least one replication");
  for (double a : opt.alphas)
    if (!(a > 0.0 && a < 1.0)) throw invalid_input("power: alpha must lie in (0, 1)");
  for (std::size_t g = 0; g < pc.sweep.grid.size(); ++g) (void)pc.sweep.at(g);  // validate every point

  const RngStream master = RngStream(opt.seed).split(StreamTag::Case, case_index);
  StatConfig cfg = pc.config;
  const std::size_t typical_n = pc.lambda ? static_cast<std::size_t>(std::llround(*pc.lambda)) : pc.n;
  cfg.methods = resolve_methods(pc.config.methods, pc.null, typical_n);
  if (cfg.methods.empty()) throw invalid_input("power: no applicable methods");

  std::optional<std::vector<double>> edges;
  if (pc.binned) edges = histogram_edges_for(pc);

  SimulationOptions sim;
  sim.B = opt.B_null;
  sim.n = pc.n;
  sim.lambda = pc.lambda;
  if (pc.binned && pc.binned->bin_null_rows) sim.histogram_edges = edges;
  sim.seed = master.key();
  sim.threads = opt.threads;
  const NullReference ref(with_stage("simulate", [&] { return simulate_null_table(pc.null, cfg, sim); }));

  PowerResult res;
  res.name = pc.name;
  res.methods.push_back(kRcName);
  for (MethodId m : cfg.methods) res.methods.emplace_back(method_name(m));
  res.grid = pc.sweep.grid;
  res.alphas = opt.alphas;
  res.reps = opt.reps;
  const std::size_t G = res.grid.size(), M = res.methods.size();

  // pvals[(g * reps + r) * M + m], RC first.
  std::vector<double> pvals(G * opt.reps * M, 1.0);
  std::vector<unsigned char> failed(G * opt.reps, 0);
  parallel_for(G * opt.reps, opt.threads, [&](std::size_t job) {
    const std::size_t g = job / opt.reps, r = job % opt.reps;
    const AlternativeSpec alt = pc.sweep.at(g);
    const RngStream job_stream = master.split(StreamTag::GridPoint, g).split(StreamTag::Replicate, r);
    for (int attempt = 0; attempt < kRowAttempts; ++attempt) {
      RngStream rng = job_stream.split(static_cast<std::uint64_t>(attempt));
      std::size_t n = pc.n;
      if (pc.lambda) n = std::poisson_distribution<std::size_t>(*pc.lambda)(rng);
      try {
        if (n < 3) throw invalid_input("sample size below 3");
        auto x = sample_alternative(alt, n, rng);
        if (edges) x = unbin(bin_data(x, *edges), pc.null);
        std::sort(x.begin(), x.end());
        const NullModel fitted = pc.null.fitted(x);
        std::vector<double> stats(cfg.methods.size());
        evaluate_statistics(x, fitted, cfg.methods, cfg, stats);
        const auto p = ref.pvalues(stats);
        double* dst = pvals.data() + job * M;
        dst[0] = ref.rc(p);
        std::copy(p.begin(), p.end(), dst + 1);
        return;
      } catch (const Error&) {
        failed[job]++;
      }
    }
    // Data the null family cannot even be fitted to counts as a rejection.
    std::fill_n(pvals.data() + job * M, M, 0.0);
  });
  res.failed_reps = static_cast<std::size_t>(std::count_if(failed.begin(), failed.end(), [](unsigned char f) { return f >= kRowAttempts; }));

  res.power.assign(opt.alphas.size(), std::vector<std::vector<double>>(G, std::vector<double>(M, 0.0)));
  for (std::size_t a = 0; a < opt.alphas.size(); ++a)
    for (std::size_t g = 0; g < G; ++g)
      for (std::size_t m = 0; m < M; ++m) {
        std::size_t hits = 0;
        for (std::size_t r = 0; r < opt.reps; ++r)
          if (pvals[((g * opt.reps) + r) * M + m] <= opt.alphas[a]) ++hits;
        res.power[a][g][m] = static_cast<double>(hits) / static_cast<double>(opt.reps);
      }
  return res;
}

// --- Summaries ------------------------------------------------------------------

inline constexpr double kGapPowerThreshold = 0.9;

struct CaseGap {
  std::string name;
  std::optional<std::size_t> grid_index;  // first grid point where some method exceeds 90%
  double grid_value = 0.0;
  std::map<std::string, double> power;
  double best = 0.0;
};

struct StudySummary {
  std::vector<std::string> methods;  // sorted by mean power, descending
  std::map<std::string, double> mean_power;
  std::vector<std::map<std::string, int>> case_ranks;  // per case, 1 = highest mean power
  std::map<std::string, double> mean_rank;             // 1 = best convention
  std::map<std::string, double> mean_rank_reversed;    // 1 = worst convention
  std::map<std::string, std::vector<int>> rank_counts; // times ranked 1, 2, ...
  std::vector<CaseGap> gaps;
};

namespace detail {

// Descending by value; values within 1e-12 are ties, broken by name.
inline std::vector<std::string> order_by_value(const std::map<std::string, double>& values) {
  std::vector<std::string> names;
  for (const auto& [k, v] : values) names.push_back(k);
  std::stable_sort(names.begin(), names.end(), [&](const std::string& a, const std::string& b) {
    const double va = values.at(a), vb = values.at(b);
    if (std::abs(va - vb) > 1e-12) return va > vb;
    return a < b;
  });
  return names;
}

}  // namespace detail

// Uses the first alpha of each result.
inline StudySummary summarize(const std::vector<PowerResult>& results) {
  if (results.empty()) throw invalid_input("summarize: no cases");
  StudySummary s;
  std::map<std::string, double> total;
  std::map<std::string, std::size_t> count;
  std::size_t max_methods = 0;
  for (const auto& res : results) {
    max_methods = std::max(max_methods, res.methods.size());
    std::map<std::string, double> case_mean;
    for (std::size_t m = 0; m < res.methods.size(); ++m) {
      double sum = 0.0;
      for (std::size_t g = 0; g < res.grid.size(); ++g) {
        sum += res.power[0][g][m];
        total[res.methods[m]] += res.power[0][g][m];
        count[res.methods[m]]++;
      }
      case_mean[res.methods[m]] = sum / static_cast<double>(res.grid.size());
    }
    const auto order = detail::order_by_value(case_mean);
    std::map<std::string, int> ranks;
    for (std::size_t i = 0; i < order.size(); ++i) ranks[order[i]] = static_cast<int>(i + 1);
    s.case_ranks.push_back(ranks);

    CaseGap gap{res.name, std::nullopt, 0.0, {}, 0.0};
    for (std::size_t g = 0; g < res.grid.size() && !gap.grid_index; ++g) {
      const auto& row = res.power[0][g];
      const double best = *std::max_element(row.begin(), row.end());
      if (best > kGapPowerThreshold) {
        gap.grid_index = g;
        gap.grid_value = res.grid[g];
        gap.best = best;
        for (std::size_t m = 0; m < res.methods.size(); ++m) gap.power[res.methods[m]] = row[m];
      }
    }
    s.gaps.push_back(std::move(gap));
  }
  for (const auto& [name, sum] : total) s.mean_power[name] = sum / static_cast<double>(count[name]);
  s.methods = detail::order_by_value(s.mean_power);
  for (const auto& name : s.methods) {
    std::vector<int> counts(max_methods, 0);
    double rank_sum = 0.0, reversed_sum = 0.0;
    int cases = 0;
    for (std::size_t c = 0; c < s.case_ranks.size(); ++c) {
      auto it = s.case_ranks[c].find(name);
      if (it == s.case_ranks[c].end()) continue;
      counts[static_cast<std::size_t>(it->second - 1)]++;
      rank_sum += it->second;
      reversed_sum += static_cast<double>(s.case_ranks[c].size() + 1) - it->second;
      ++cases;
    }
    s.rank_counts[name] = counts;
    s.mean_rank[name] = rank_sum / cases;
    s.mean_rank_reversed[name] = reversed_sum / cases;
  }
  return s;
}

// --- Pairwise comparison illustration -------------------------------------------

// Two-sided Welch two-sample t test.
inline double welch_t_pvalue(std::span<const double> a, std::span<const double> b) {
  auto moments = [](std::span<const double> v) {
    const double n = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::pair{mean, ss / (n - 1.0)};
  };
  if (a.size() < 2 || b.size() < 2) throw invalid_input("t test: each group needs at least 2 observations");
  const auto [ma, va] = moments(a);
  const auto [mb, vb] = moments(b);
  const double sa = va / static_cast<double>(a.size()), sb = vb / static_cast<double>(b.size());
  const double se2 = sa + sb;
  if (!(se2 > 0.0)) throw invalid_input("t test: zero variance in both groups");
  const double t = (ma - mb) / std::sqrt(se2);
  const double df = se2 * se2 /
                    (sa * sa / static_cast<double>(a.size() - 1) + sb * sb / static_cast<double>(b.size() - 1));
  boost::math::students_t dist(df);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

struct AnovaDemoResult {
  std::size_t pairs = 0;
  std::vector<double> raw_minima;  // per replication, in replication order
  std::vector<double> adjusted;
  AdjustmentCurve curve;
  std::vector<double> identity_overlay;    // y = p on the curve grid
  std::vector<double> bonferroni_overlay;  // y = 1 - (1 - p)^pairs
};

// Standard-normal observations split at random into groups (so every null is
// true), all pairwise Welch t tests, minimum p-value per replication; the
// minima are then adjusted by the empirical CDF of a second, independent batch
// of minima. Assignments leaving a group with fewer than two members are redrawn.
inline AnovaDemoResult anova_demo(std::size_t n_obs, std::size_t n_groups, std::size_t reps, std::uint64_t seed,
                                  unsigned threads = 0) {
  if (n_groups < 2) throw invalid_input("demo: need at least 2 groups");
  if (n_obs < 2 * n_groups) throw invalid_input("demo: need at least 2 observations per group");
  if (reps < 1) throw invalid_input("demo: need at least one replication");
  AnovaDemoResult res;
  res.pairs = n_groups * (n_groups - 1) / 2;
  auto simulate_minima = [&](StreamTag tag) {
    std::vector<double> minima(reps, 1.0);
    const RngStream master = RngStream(seed).split(tag, 0);
    parallel_for(reps, threads, [&](std::size_t r) {
      RngStream rng = master.split(StreamTag::Replicate, r);
      std::normal_distribution<double> z(0.0, 1.0);
      std::vector<double> x(n_obs);
      for (double& v : x) v = z(rng);
      std::uniform_int_distribution<std::size_t> pick(0, n_groups - 1);
      std::vector<std::vector<double>> groups;
      do {
        groups.assign(n_groups, {});
        for (double v : x) groups[pick(rng)].push_back(v);
      } while (std::any_of(groups.begin(), groups.end(), [](const auto& g) { return g.size() < 2; }));
      double m = 1.0;
      for (std::size_t i = 0; i < n_groups; ++i)
        for (std::size_t j = i + 1; j < n_groups; ++j) m = std::min(m, welch_t_pvalue(groups[i], groups[j]));
      minima[r] = m;
    });
    return minima;
  };
  // The curve comes from a separate batch so the adjusted values are not
  // judged against their own empirical CDF.
  res.raw_minima = simulate_minima(StreamTag::Demo);
  res.curve = AdjustmentCurve::from_minima(simulate_minima(StreamTag::MinpBatch));
  res.adjusted.reserve(reps);
  for (double m : res.raw_minima) res.adjusted.push_back(res.curve(m));
  for (double p : res.curve.grid()) {
    res.identity_overlay.push_back(p);
    res.bonferroni_overlay.push_back(1.0 - std::pow(1.0 - p, static_cast<double>(res.pairs)));
  }
  return res;
}

}  // namespace gofsim
