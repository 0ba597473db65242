#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "gofsim/chisquare.hpp"

using namespace gofsim;

namespace {

// Data spanning exactly [lo, hi] with n points.
std::vector<double> spanning(double lo, double hi, std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  x.back() = hi;
  return x;
}

void expect_strictly_increasing(const std::vector<double>& e) {
  for (std::size_t i = 1; i < e.size(); ++i) ASSERT_LT(e[i - 1], e[i]) << "edge " << i;
}

}  // namespace

TEST(BinningSpec, VariantsFixKappaAndBinCount) {
  auto rgd = binning_spec(BinningVariant::RGd, 2, 17);
  EXPECT_EQ(rgd.k, 7u);
  EXPECT_EQ(rgd.kappa, 0.5);
  EXPECT_EQ(binning_spec(BinningVariant::RGd, 0).k, 5u);
  auto es = binning_spec(BinningVariant::EqualSize, 1, 12);
  EXPECT_EQ(es.k, 12u);
  EXPECT_EQ(es.kappa, 1.0);
  auto ep = binning_spec(BinningVariant::EqualProb, 1);
  EXPECT_EQ(ep.k, kDefaultBinCount);
  EXPECT_EQ(ep.kappa, 0.0);
}

TEST(BuildBins, UniformNullIgnoresKappa) {
  auto u = make_null_model("uniform", {0, 1}, false);
  auto x = spanning(0, 1, 1000);
  const std::vector<double> want{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  for (double kappa : {0.0, 0.25, 0.5, 0.9, 1.0}) {
    auto bins = build_bins(u, x, {BinningVariant::RGd, 5, kappa});
    EXPECT_EQ(bins.edges, want) << kappa;
  }
}

TEST(BuildBins, TwoBinsSplitAtTheMedian) {
  auto z = make_null_model("normal", {1.0, 2.0}, false);
  auto x = spanning(-4, 5, 200);
  for (double kappa : {0.0, 0.5, 1.0}) {
    auto bins = build_bins(z, x, {BinningVariant::EqualSize, 2, kappa});
    ASSERT_EQ(bins.edges.size(), 3u);
    EXPECT_EQ(bins.edges[0], -4.0);
    EXPECT_NEAR(bins.edges[1], 1.0, 1e-12);
    EXPECT_EQ(bins.edges[2], 5.0);
  }
}

TEST(BuildBins, EqualProbabilityEdgesAreNullQuantiles) {
  auto z = make_null_model("normal", {0, 1}, false);
  auto x = spanning(-3, 3, 1000);
  auto bins = build_bins(z, x, {BinningVariant::EqualProb, 4, 0.0});
  ASSERT_EQ(bins.edges.size(), 5u);
  EXPECT_NEAR(bins.edges[1], -0.6745, 1e-4);
  EXPECT_NEAR(bins.edges[2], 0.0, 1e-12);
  EXPECT_NEAR(bins.edges[3], 0.6745, 1e-4);
}

TEST(BuildBins, InfiniteEndsUseTailQuantiles) {
  auto z = make_null_model("normal", {0, 1}, false);
  auto edges = equal_size_edges(z, -INFINITY, INFINITY, 6, 100);
  ASSERT_EQ(edges.size(), 7u);
  EXPECT_EQ(edges.front(), -INFINITY);
  EXPECT_EQ(edges.back(), INFINITY);
  EXPECT_NEAR(edges[1], z.quantile(0.05), 1e-12);
  EXPECT_NEAR(edges[5], z.quantile(0.95), 1e-12);
  auto e = make_null_model("exponential", {1}, false);
  auto half = equal_size_edges(e, 0.0, INFINITY, 4, 50);
  ASSERT_EQ(half.size(), 5u);
  EXPECT_EQ(half[0], 0.0);
  EXPECT_NEAR(half[3], e.quantile(0.9), 1e-12);
  EXPECT_EQ(half[4], INFINITY);
}

TEST(MergeSmallBins, LeavesLargeBinsAlone) {
  auto u = make_null_model("uniform", {0, 1}, false);
  std::vector<double> edges{0, 0.25, 0.5, 0.75, 1};
  EXPECT_EQ(merge_small_bins(u, edges, 100).edges, edges);
}

TEST(MergeSmallBins, FirstBinMergesRight) {
  auto u = make_null_model("uniform", {0, 1}, false);
  const double n = 102;
  auto bins = merge_small_bins(u, {0, 2 / n, 52 / n, 1}, 102);
  ASSERT_EQ(bins.edges.size(), 3u);
  auto e = expected_counts(u, bins.edges, n);
  EXPECT_NEAR(e[0], 52, 1e-9);
  EXPECT_NEAR(e[1], 50, 1e-9);
}

TEST(MergeSmallBins, SmallLeadingPairCollapses) {
  auto u = make_null_model("uniform", {0, 1}, false);
  const double n = 107;
  auto bins = merge_small_bins(u, {0, 3 / n, 7 / n, 1}, 107);
  auto e = expected_counts(u, bins.edges, n);
  ASSERT_EQ(e.size(), 2u);
  EXPECT_NEAR(e[0], 7, 1e-9);
  EXPECT_NEAR(e[1], 100, 1e-9);
}

TEST(MergeSmallBins, InteriorBinJoinsSmallerNeighbour) {
  auto u = make_null_model("uniform", {0, 1}, false);
  const double n = 100;
  // E = (30, 2, 10, 58): the 2 joins the 10
  auto bins = merge_small_bins(u, {0, 0.30, 0.32, 0.42, 1}, 100);
  auto e = expected_counts(u, bins.edges, n);
  ASSERT_EQ(e.size(), 3u);
  EXPECT_NEAR(e[0], 30, 1e-9);
  EXPECT_NEAR(e[1], 12, 1e-9);
  EXPECT_NEAR(e[2], 58, 1e-9);
}

TEST(MergeSmallBins, DegenerateTotals) {
  auto u = make_null_model("uniform", {0, 1}, false);
  EXPECT_THROW(merge_small_bins(u, {0, 0.5, 1}, 5), Error);
  EXPECT_THROW(merge_small_bins(u, {0, 0.01, 0.02}, 200), Error);
}

TEST(ChisqStat, HandExamples) {
  std::vector<double> o{4, 6, 10}, e{4, 6, 10};
  EXPECT_EQ(chisq_from_counts(o, e), 0.0);
  EXPECT_DOUBLE_EQ(chisq_from_counts(std::vector<double>{10, 0}, std::vector<double>{5, 5}), 10.0);
  EXPECT_THROW(chisq_from_counts(std::vector<double>{1}, std::vector<double>{0}), Error);
}

TEST(ChisqStat, CountsAreRightClosed) {
  std::vector<double> x{0.1, 0.5, 0.5, 0.7, 1.0};
  std::vector<double> edges{-INFINITY, 0.5, 1.0, INFINITY};
  EXPECT_EQ(observed_counts(x, edges), (std::vector<double>{3, 2, 0}));
}

TEST(ChisqStat, UniformRGdMatchesChiSquareFourDf) {
  auto u = make_null_model("uniform", {0, 1}, false);
  const auto spec = binning_spec(BinningVariant::RGd, 0);
  RngStream rng(101);
  std::vector<double> stats;
  for (int r = 0; r < 2000; ++r) stats.push_back(chisq_stat(u.sample(1000, rng), u, spec));
  std::sort(stats.begin(), stats.end());
  const double q95 = stats[static_cast<std::size_t>(0.95 * stats.size())];
  EXPECT_NEAR(q95, 9.49, 0.15 * 9.49);
  for (double s : stats) EXPECT_GE(s, 0.0);
}

TEST(ChisqStat, RandomizedBinsStayValid) {
  const std::vector<std::pair<const char*, std::vector<double>>> nulls{
      {"normal", {0, 1}}, {"uniform", {0, 1}}, {"exponential", {1}}, {"gamma", {2, 1}},
      {"beta", {2, 3}},   {"erlang", {3, 2}},  {"truncexp", {0.7, 0, 1}}};
  RngStream root(202);
  int formed = 0;
  for (int c = 0; c < 1000; ++c) {
    RngStream rng = root.split(StreamTag::Case, static_cast<std::uint64_t>(c));
    const auto& [family, params] = nulls[static_cast<std::size_t>(c) % nulls.size()];
    auto model = make_null_model(family, params, false);
    const std::size_t n = 10 + static_cast<std::size_t>(rng.uniform_open() * 2000);
    // Data drawn from a random sub-range of the null, so the bin range varies.
    const double a = 0.3 * rng.uniform_open(), b = 1.0 - 0.3 * rng.uniform_open();
    std::vector<double> x(n);
    for (double& v : x) v = model.quantile(a + (b - a) * rng.uniform_open());
    std::sort(x.begin(), x.end());
    const auto variant = static_cast<BinningVariant>(c % 3);
    const auto spec = binning_spec(variant, 0, 2 + static_cast<std::size_t>(c % 15));
    BinSet bins;
    try {
      bins = build_bins(model, x, spec);
    } catch (const Error&) {
      continue;  // too little null mass inside the data range
    }
    expect_strictly_increasing(bins.edges);
    if (bins.bins() < 2) continue;
    ++formed;
    for (double e : expected_counts(model, bins.edges, static_cast<double>(n))) ASSERT_GT(e, 5.0) << c;
    EXPECT_GE(chisq_fitted(x, model, spec), 0.0);
  }
  EXPECT_GT(formed, 800);
}
