// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "gofsim/gofsim.hpp"
#include "oracle/naive_statistics.hpp"

using namespace gofsim;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& check) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s criterion %d: %s | %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str(),
              secs);
  std::fflush(stdout);
}

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

// --- 1 and 2: size and uniformity of rc ------------------------------------------

std::vector<Type1Row> size_rows;

const std::vector<Type1Row>& size_study() {
  if (size_rows.empty()) {
    std::vector<Type1Cell> cells{
        {"Normal", make_null_model("normal", {0.0, 1.0}, false), 100},
        {"Normal", make_null_model("normal", {0.0, 1.0}, true), 100},
        {"Uniform", make_null_model("uniform", {0.0, 1.0}, false), 100},
        {"Exponential", make_null_model("exponential", {1.0}, true), 100},
    };
    Type1Options opt;
    opt.alphas = {0.01, 0.05, 0.10};
    opt.B = 1000;
    opt.reps = 1000;
    opt.seed = 20240101;
    size_rows = type1_study(cells, opt);
  }
  return size_rows;
}

std::string cell_name(const Type1Row& r) { return r.label + (r.estimated ? "/est" : "/fixed"); }

Outcome criterion_size() {
  const double lo[] = {0.004, 0.035, 0.082}, hi[] = {0.018, 0.065, 0.118};
  Outcome o;
  for (const auto& row : size_study()) {
    o.detail += cell_name(row) + " [";
    for (std::size_t a = 0; a < 3; ++a) {
      const double v = row.rejection[a];
      if (!(v >= lo[a] && v <= hi[a])) o.pass = false;
      o.detail += (a ? " " : "") + fmt(100 * v, 3) + "%";
    }
    o.detail += "] ";
  }
  return o;
}

Outcome criterion_uniformity() {
  Outcome o;
  for (const auto& row : size_study()) {
    const double d = uniformity_distance(row.rc_values);
    if (!(d < 0.06)) o.pass = false;
    o.detail += cell_name(row) + " D=" + fmt(d) + " ";
  }
  return o;
}

// --- 3: oracle equivalence -----------------------------------------------------------

Outcome criterion_oracle() {
  const double rel = 1e-10;
  const std::vector<std::pair<const char*, std::vector<double>>> nulls{
      {"normal", {0.3, 1.7}}, {"uniform", {0, 1}}, {"exponential", {1.4}}, {"gamma", {2.0, 1.0}}, {"beta", {2, 3}}};
  RngStream root(777);
  double worst = 0.0;
  std::string worst_what = "none";
  std::size_t checks = 0;
  auto compare = [&](double got, double want, const std::string& what) {
    ++checks;
    const double scale = std::max(std::abs(got), std::abs(want));
    const double err = scale == 0.0 ? 0.0 : std::abs(got - want) / scale;
    if (!(err <= worst)) {
      worst = std::isnan(err) ? INFINITY : err;
      worst_what = what;
    }
  };
  boost::math::normal z;
  for (std::size_t n : {5u, 50u, 500u}) {
    for (int rep = 0; rep < 100; ++rep) {
      RngStream rng = root.split(StreamTag::Case, n * 1000 + static_cast<std::size_t>(rep));
      const auto& [family, params] = nulls[static_cast<std::size_t>(rep) % nulls.size()];
      auto truth = make_null_model(family, params, false);
      auto x = truth.sample(n, rng);
      if (rep % 2)
        for (double& v : x)
          if (rng.uniform_open() < 0.3) v = truth.quantile(0.5 + 0.45 * (rng.uniform_open() - 0.5));
      std::sort(x.begin(), x.end());
      const std::string fam(family);
      const bool estimate = (fam == "normal" || fam == "exponential") && rep % 3 == 0;
      auto fitted = make_null_model(family, params, estimate).fitted(x);
      std::vector<double> y(n);
      for (std::size_t i = 0; i < n; ++i) y[i] = fitted.cdf(x[i]);
      const std::string tag = " " + fam + " n=" + std::to_string(n) + " rep=" + std::to_string(rep);
      compare(ks(y), oracle::ks(y), "KS" + tag);
      compare(ad(y), oracle::ad(y), "AD" + tag);
      compare(cdm(y), oracle::cm(y), "CdM" + tag);
      compare(watson(y), oracle::watson(y), "W" + tag);
      compare(zk(y), oracle::zk(y), "ZK" + tag);
      compare(za(y), oracle::za(y), "ZA" + tag);
      compare(zc(y), oracle::zc(y), "ZC" + tag);
      compare(ppcc(x, fitted), oracle::ppcc(x, [&](double p) { return fitted.quantile(p); }), "ppcc" + tag);
      compare(jb(x), oracle::jb(x), "JB" + tag);
      compare(sw(x), oracle::sw(x, [&](double p) { return boost::math::quantile(z, p); }), "SW" + tag);
      compare(smooth(y, 10), oracle::smooth(y, 10), "smooth" + tag);
    }
  }
  return {worst <= rel, std::to_string(checks) + " comparisons, worst relative error " + fmt(worst, 3) + " (" +
                            worst_what + ")"};
}

// --- 4: independent and identical columns ----------------------------------------------

NullTable synthetic_table(std::size_t B, std::size_t M, std::uint64_t seed, bool identical) {
  NullTable t;
  t.methods.assign(kAllMethods.begin(), kAllMethods.begin() + static_cast<std::ptrdiff_t>(M));
  t.rows = B;
  t.values.resize(B * M);
  t.sample_sizes.assign(B, 0);
  RngStream rng(seed);
  for (std::size_t r = 0; r < B; ++r) {
    const double shared = rng.uniform_open();
    for (std::size_t k = 0; k < M; ++k) t.values[r * M + k] = identical ? shared : rng.uniform_open();
  }
  return t;
}

double sup_distance(const AdjustmentCurve& c, const std::function<double(double)>& f) {
  double d = 0.0;
  for (std::size_t i = 0; i < c.grid().size(); ++i) d = std::max(d, std::abs(c.cdf_values()[i] - f(c.grid()[i])));
  return d;
}

Outcome criterion_limits() {
  const double indep = sup_distance(build_adjustment_curve(synthetic_table(10000, 5, 41, false)),
                                    [](double p) { return 1 - std::pow(1 - p, 5); });
  const double same =
      sup_distance(build_adjustment_curve(synthetic_table(10000, 5, 42, true)), [](double p) { return p; });
  return {indep <= 0.02 && same <= 0.02,
          "independent sup=" + fmt(indep) + " identical sup=" + fmt(same)};
}

// --- 5: chi-square binning ------------------------------------------------------------

Outcome criterion_binning() {
  const std::vector<std::pair<const char*, std::vector<double>>> nulls{
      {"normal", {0, 1}}, {"uniform", {0, 1}}, {"exponential", {1}}, {"gamma", {2, 1}},
      {"beta", {2, 3}},   {"erlang", {3, 2}},  {"truncexp", {0.7, 0, 1}}};
  RngStream root(505);
  std::size_t formed = 0, small = 0, kappa_cases = 0, kappa_mismatch = 0;
  double min_expected = INFINITY;
  for (std::size_t c = 0; c < 1000; ++c) {
    RngStream rng = root.split(StreamTag::Case, c);
    const auto& [family, params] = nulls[c % nulls.size()];
    auto model = make_null_model(family, params, false);
    const std::size_t n = 10 + static_cast<std::size_t>(rng.uniform_open() * 2000);
    const double a = 0.3 * rng.uniform_open(), b = 1.0 - 0.3 * rng.uniform_open();
    std::vector<double> x(n);
    for (double& v : x) v = model.quantile(a + (b - a) * rng.uniform_open());
    std::sort(x.begin(), x.end());
    const auto spec = binning_spec(static_cast<BinningVariant>(c % 3), c % 3, 2 + c % 15);
    BinSet bins;
    try {
      bins = build_bins(model, x, spec);
    } catch (const Error&) {
      continue;
    }
    if (bins.bins() < 2) continue;
    ++formed;
    for (double e : expected_counts(model, bins.edges, static_cast<double>(n))) {
      min_expected = std::min(min_expected, e);
      if (!(e > 5.0)) ++small;
    }
  }
  // Uniform null: any blend weight gives the equal-width edges.
  auto u = make_null_model("uniform", {0, 1}, false);
  RngStream kr(506);
  for (std::size_t c = 0; c < 1000; ++c) {
    RngStream rng = kr.split(StreamTag::Case, c);
    const std::size_t n = 20 + static_cast<std::size_t>(rng.uniform_open() * 2000);
    std::vector<double> x(n);
    for (double& v : x) v = rng.uniform_open();
    x.push_back(0.0);
    x.push_back(1.0);
    std::sort(x.begin(), x.end());
    const std::size_t k = 2 + c % 12;
    const double kappa = rng.uniform_open();
    const auto width = build_bins(u, x, {BinningVariant::EqualSize, k, 1.0});
    const auto blend = build_bins(u, x, {BinningVariant::RGd, k, kappa});
    ++kappa_cases;
    if (blend.edges != width.edges) ++kappa_mismatch;
  }
  const bool enough = formed >= 800;
  return {small == 0 && kappa_mismatch == 0 && enough,
          std::to_string(formed) + " binned cases, min expected " + fmt(min_expected) + ", " + std::to_string(small) +
              " bins <= 5; uniform kappa mismatches " + std::to_string(kappa_mismatch) + "/" +
              std::to_string(kappa_cases)};
}

// --- 6 and 7: power -------------------------------------------------------------------

PowerOptions power_options(std::uint64_t seed) {
  PowerOptions opt;
  opt.B_null = 1000;
  opt.reps = 500;
  opt.alphas = {0.05};
  opt.seed = seed;
  return opt;
}

PowerCase power_case(const std::string& name, NullModel null, const std::string& family, std::vector<double> params,
                     std::size_t vary, std::vector<double> grid) {
  return {name, std::move(null), {family, std::move(params), vary, std::move(grid)}, 1000,
          std::nullopt, std::nullopt, StatConfig{}};
}

Outcome criterion_power() {
  Outcome o;
  auto t3 = power_study(power_case("t3", make_null_model("normal", {0, 1}, true), "t", {3}, 0, {3}), power_options(61));
  const double p_t = t3.at(kRcName, 0);
  auto b15 = power_study(
      power_case("beta", make_null_model("uniform", {0, 1}, false), "beta", {1, 1.5}, 1, {1.5}), power_options(62));
  const double p_b = b15.at(kRcName, 0);
  auto flat = power_study(
      power_case("flat", make_null_model("uniform", {0, 1}, false), "linear", {0}, 0, {0}), power_options(63));
  const double se = std::sqrt(0.05 * 0.95 / 500.0);
  o.pass = p_t > 0.99 && p_b > 0.9;
  o.detail = "t(3) RC=" + fmt(p_t) + " Beta(1,1.5) RC=" + fmt(p_b) + "; null:";
  for (std::size_t m = 0; m < flat.methods.size(); ++m) {
    const double v = flat.power[0][0][m];
    if (!(std::abs(v - 0.05) <= 2 * se)) o.pass = false;
    o.detail += " " + flat.methods[m] + "=" + fmt(v, 3);
  }
  o.detail += " (band 0.05+-" + fmt(2 * se, 3) + ")";
  return o;
}

Outcome criterion_dominance() {
  const auto uniform = make_null_model("uniform", {0, 1}, false);
  const std::vector<PowerCase> cases{
      power_case("t-vs-normal", make_null_model("normal", {0, 1}, true), "t", {30}, 0, {30, 20, 15, 10, 7, 5, 3}),
      power_case("beta-vs-uniform", uniform, "beta", {1, 1}, 1, {1.0, 1.05, 1.1, 1.15, 1.2, 1.3, 1.5}),
      power_case("linear-vs-uniform", uniform, "linear", {0}, 0, {0.0, 0.05, 0.1, 0.15, 0.2, 0.3, 0.5}),
      power_case("quadratic-vs-uniform", uniform, "quadratic", {0}, 0, {0.0, 0.1, 0.2, 0.3, 0.4, 0.6, 1.0}),
      power_case("gamma-vs-exponential", make_null_model("exponential", {1}, true), "gamma", {1, 1}, 0,
                 {1.0, 1.05, 1.1, 1.15, 1.2, 1.3, 1.5}),
      power_case("bump-vs-exponential", make_null_model("exponential", {1}, false), "expbump", {0.25, 1.0}, 1,
                 {1.0, 0.98, 0.96, 0.94, 0.92, 0.9, 0.85}),
  };
  std::vector<PowerResult> results;
  for (std::size_t c = 0; c < cases.size(); ++c) results.push_back(power_study(cases[c], power_options(70), c));
  const auto summary = summarize(results);
  Outcome o;
  for (const auto& gap : summary.gaps) {
    if (!gap.grid_index) {
      o.pass = false;
      o.detail += gap.name + ": no method reached 90% ";
      continue;
    }
    const double rc = gap.power.at(kRcName);
    if (!(rc >= gap.best - 0.15)) o.pass = false;
    o.detail += gap.name + "@" + fmt(gap.grid_value) + " RC=" + fmt(rc, 3) + " best=" + fmt(gap.best, 3) + " ";
  }
  return o;
}

// --- 8: ANOVA demo --------------------------------------------------------------------

Outcome criterion_anova() {
  const auto res = anova_demo(100, 5, 1000, 88);
  double mean = 0.0;
  for (double v : res.raw_minima) mean += v / static_cast<double>(res.raw_minima.size());
  const double d = uniformity_distance(res.adjusted);
  return {mean < 0.2 && d < 0.06, "raw min-p mean " + fmt(mean) + ", adjusted KS distance " + fmt(d)};
}

}  // namespace

int main() {
  report(1, "rejection rates at 1/5/10% within bands (n=100, B=1000, 1000 reps)", criterion_size);
  report(2, "rc p-values uniform, KS distance < 0.06 per cell", criterion_uniformity);
  report(3, "statistics match brute-force oracle within 1e-10 relative", criterion_oracle);
  report(4, "adjustment curve limits within 0.02 (M=5, B=10000)", criterion_limits);
  report(5, "chi-square bins: expected counts > 5, uniform kappa-invariance", criterion_binning);
  report(6, "power spot checks (500 reps, B=1000, n=1000)", criterion_power);
  report(7, "RC within 15 points of the best method at each case's gap point", criterion_dominance);
  report(8, "ANOVA demo: raw mean < 0.2, adjusted KS < 0.06", criterion_anova);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
