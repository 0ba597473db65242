#pragma once

// Goodness-of-fit test statistics. Every statistic is oriented so that large
// values are evidence against the null hypothesis.

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/math/special_functions/erf.hpp>

#include "gofsim/chisquare.hpp"
#include "gofsim/error.hpp"
#include "gofsim/histogram.hpp"
#include "gofsim/model.hpp"

namespace gofsim {

enum class MethodId {
  KS,
  AD,
  CdM,
  W,
  ZA,
  ZK,
  ZC,
  RGd,
  EqualSize,
  EqualProb,
  ppcc,
  JB,
  SW,
  sNor,
  sUnif,
  sExp,
};

inline constexpr std::array<MethodId, 16> kAllMethods{
    MethodId::KS,   MethodId::AD,        MethodId::CdM,       MethodId::W,    MethodId::ZA, MethodId::ZK,
    MethodId::ZC,   MethodId::RGd,       MethodId::EqualSize, MethodId::EqualProb, MethodId::ppcc,
    MethodId::JB,   MethodId::SW,        MethodId::sNor,      MethodId::sUnif, MethodId::sExp};

inline std::string_view method_name(MethodId m) {
  switch (m) {
    case MethodId::KS: return "KS";
    case MethodId::AD: return "AD";
    case MethodId::CdM: return "CdM";
    case MethodId::W: return "W";
    case MethodId::ZA: return "ZA";
    case MethodId::ZK: return "ZK";
    case MethodId::ZC: return "ZC";
    case MethodId::RGd: return "RGd";
    case MethodId::EqualSize: return "EqualSize";
    case MethodId::EqualProb: return "EqualProb";
    case MethodId::ppcc: return "ppcc";
    case MethodId::JB: return "JB";
    case MethodId::SW: return "SW";
    case MethodId::sNor: return "sNor";
    case MethodId::sUnif: return "sUnif";
    case MethodId::sExp: return "sExp";
  }
  return "?";
}

// Case-insensitive; spaces, '_' and '-' are ignored ("equal size" == "EqualSize").
inline MethodId parse_method(std::string_view text) {
  auto norm = [](std::string_view s) {
    std::string out;
    for (char c : s)
      if (c != ' ' && c != '_' && c != '-') out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return out;
  };
  const std::string key = norm(text);
  for (MethodId m : kAllMethods)
    if (norm(method_name(m)) == key) return m;
  throw invalid_input("unknown method '" + std::string(text) + "'");
}

// The EDF methods, enabled when no method list is given.
inline std::vector<MethodId> default_methods() {
  return {MethodId::KS, MethodId::AD, MethodId::CdM, MethodId::W, MethodId::ZA, MethodId::ZK, MethodId::ZC};
}

inline constexpr double kLogClamp = 1e-12;
inline constexpr int kDefaultSmoothOrder = 10;
inline constexpr std::size_t kShapiroWilkMaxN = 5000;

struct StatConfig {
  std::vector<MethodId> methods = default_methods();
  std::size_t nbins = kDefaultBinCount;  // EqualSize / EqualProb bin count
  int smooth_max_order = kDefaultSmoothOrder;
};

struct StatVector {
  std::vector<MethodId> methods;
  std::vector<double> values;

  std::size_t size() const { return methods.size(); }
  bool empty() const { return methods.empty(); }
  std::optional<double> find(MethodId m) const {
    for (std::size_t i = 0; i < methods.size(); ++i)
      if (methods[i] == m) return values[i];
    return std::nullopt;
  }
  double at(MethodId m) const {
    auto v = find(m);
    if (!v) throw invalid_input("statistic '" + std::string(method_name(m)) + "' not computed");
    return *v;
  }
};

// Whether a method can run for this model and sample size. Methods that
// cannot run are dropped from a run rather than treated as errors.
inline bool method_applicable(MethodId m, const NullModel& model, std::size_t n) {
  switch (m) {
    case MethodId::SW: return model.family() == "normal" && n >= 3 && n <= kShapiroWilkMaxN;
    case MethodId::sNor: return model.family() == "normal";
    case MethodId::sUnif: return model.family() == "uniform";
    case MethodId::sExp: return model.family() == "exponential";
    case MethodId::ppcc: return model.has_quantile() && n >= 3;
    case MethodId::RGd:
    case MethodId::EqualSize:
    case MethodId::EqualProb: return model.has_quantile();
    case MethodId::JB: return n >= 2;
    default: return n >= 1;
  }
}

// Methods in canonical order with duplicates and inapplicable entries removed.
inline std::vector<MethodId> resolve_methods(std::span<const MethodId> requested, const NullModel& model,
                                             std::size_t n, std::vector<MethodId>* dropped = nullptr) {
  std::vector<MethodId> out;
  for (MethodId m : kAllMethods) {
    if (std::find(requested.begin(), requested.end(), m) == requested.end()) continue;
    if (method_applicable(m, model, n)) out.push_back(m);
    else if (dropped) dropped->push_back(m);
  }
  return out;
}

// --- EDF statistics on y_i = F(x_(i)), sorted ascending -------------------

inline double ks(std::span<const double> y) {
  const double n = static_cast<double>(y.size());
  double d = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = static_cast<double>(i);
    d = std::max({d, (r + 1.0) / n - y[i], y[i] - r / n});
  }
  return d;
}

// The log-based statistics clamp y into [eps, 1 - eps].
inline std::vector<double> clamp_pit(std::span<const double> y) {
  std::vector<double> c(y.begin(), y.end());
  for (double& v : c) v = std::clamp(v, kLogClamp, 1.0 - kLogClamp);
  return c;
}

inline double ad(std::span<const double> y) {
  const auto c = clamp_pit(y);
  const std::size_t n = c.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    s += (2.0 * static_cast<double>(i) + 1.0) * (std::log(c[i]) + std::log1p(-c[n - 1 - i]));
  return -static_cast<double>(n) - s / static_cast<double>(n);
}

inline double cdm(std::span<const double> y) {
  const double n = static_cast<double>(y.size());
  double s = 1.0 / (12.0 * n);
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = (2.0 * static_cast<double>(i) + 1.0) / (2.0 * n) - y[i];
    s += d * d;
  }
  return s;
}

// Watson's U^2.
inline double watson(std::span<const double> y) {
  const double n = static_cast<double>(y.size());
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= n;
  return cdm(y) - n * (mean - 0.5) * (mean - 0.5);
}

inline double zk(std::span<const double> y) {
  const auto c = clamp_pit(y);
  const double n = static_cast<double>(c.size());
  double best = -INFINITY;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double m = static_cast<double>(i) + 0.5;
    const double v = m * std::log(m / (n * c[i])) + (n - m) * std::log((n - m) / (n * (1.0 - c[i])));
    best = std::max(best, v);
  }
  return best;
}

inline double za(std::span<const double> y) {
  const auto c = clamp_pit(y);
  const double n = static_cast<double>(c.size());
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double m = static_cast<double>(i) + 0.5;
    s += std::log(c[i]) / (n - m) + std::log1p(-c[i]) / m;
  }
  return -s;
}

inline double zc(std::span<const double> y) {
  const auto c = clamp_pit(y);
  const double n = static_cast<double>(c.size());
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double r = static_cast<double>(i) + 1.0;
    const double t = std::log((1.0 / c[i] - 1.0) / ((n - 0.5) / (r - 0.75) - 1.0));
    s += t * t;
  }
  return s;
}

// --- Data-space statistics ------------------------------------------------

// Plotting positions (i - a)/(n + 1 - 2a), a = 3/8 for n <= 10 and 1/2 otherwise.
inline std::vector<double> ppoints(std::size_t n) {
  const double a = n <= 10 ? 3.0 / 8.0 : 0.5;
  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i)
    p[i] = (static_cast<double>(i + 1) - a) / (static_cast<double>(n) + 1.0 - 2.0 * a);
  return p;
}

inline double pearson_correlation(std::span<const double> x, std::span<const double> q) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, mq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    mq += q[i];
  }
  mx /= n;
  mq /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (q[i] - mq);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (q[i] - mq) * (q[i] - mq);
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw invalid_input("correlation of a constant vector");
  return sxy / std::sqrt(sxx * syy);
}

// 1 - cor(x, q) with q the model quantiles at the plotting positions. x must be sorted.
inline double ppcc(std::span<const double> sorted, const NullModel& fitted) {
  if (sorted.size() < 3) throw invalid_input("ppcc: need n >= 3");
  const auto p = ppoints(sorted.size());
  std::vector<double> q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) q[i] = fitted.quantile(p[i]);
  return 1.0 - pearson_correlation(sorted, q);
}

inline double jb(std::span<const double> x) {
  if (x.size() < 2) throw invalid_input("JB: need n >= 2");
  const double n = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  if (!(m2 > 0.0)) throw invalid_input("JB: zero variance");
  const double skew = m3 / std::pow(m2, 1.5);
  const double kurt = m4 / (m2 * m2);
  return n / 6.0 * (skew * skew + (kurt - 3.0) * (kurt - 3.0) / 4.0);
}

// Shapiro-Wilk coefficients for the lower half of the order statistics
// (Royston 1995 approximation, AS R94). Normalized so the full antisymmetric
// vector has unit length.
inline std::vector<double> shapiro_wilk_coefficients(std::size_t n) {
  const std::size_t half = n / 2;
  std::vector<double> a(half);
  if (n == 3) {
    a[0] = std::sqrt(0.5);
    return a;
  }
  static constexpr double c1[] = {0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056};
  static constexpr double c2[] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
  auto poly = [](const double* c, double x) {
    double r = c[5];
    for (int i = 4; i >= 0; --i) r = r * x + c[i];
    return r;
  };
  const double an = static_cast<double>(n);
  std::vector<double> m(half);
  double summ2 = 0.0;
  for (std::size_t i = 0; i < half; ++i) {
    const double u = (static_cast<double>(i + 1) - 0.375) / (an + 0.25);
    m[i] = -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u);
    summ2 += m[i] * m[i];
  }
  summ2 *= 2.0;
  const double ssumm2 = std::sqrt(summ2);
  const double rsn = 1.0 / std::sqrt(an);
  const double a1 = poly(c1, rsn) - m[0] / ssumm2;
  std::size_t first;
  double fac;
  if (n > 5) {
    first = 2;
    const double a2 = -m[1] / ssumm2 + poly(c2, rsn);
    fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
    a[1] = a2;
  } else {
    first = 1;
    fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
  }
  a[0] = a1;
  for (std::size_t i = first; i < half; ++i) a[i] = -m[i] / fac;
  return a;
}

// 1 - W for sorted data, 3 <= n <= 5000.
inline double sw(std::span<const double> sorted) {
  const std::size_t n = sorted.size();
  if (n < 3 || n > kShapiroWilkMaxN) throw invalid_input("SW: need 3 <= n <= 5000");
  const auto a = shapiro_wilk_coefficients(n);
  double numerator = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) numerator += a[i] * (sorted[n - 1 - i] - sorted[i]);
  double mean = 0.0;
  for (double v : sorted) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : sorted) ss += (v - mean) * (v - mean);
  if (!(ss > 0.0)) throw invalid_input("SW: zero variance");
  const double w = std::min(1.0, numerator * numerator / ss);
  return 1.0 - w;
}

// --- Neyman smooth test ---------------------------------------------------

// phi_j(u) = sqrt(2j + 1) P_j(2u - 1), j = 1..order: orthonormal on [0, 1].
inline void legendre_orthonormal(double u, int order, std::span<double> out) {
  const double t = 2.0 * u - 1.0;
  double p_prev = 1.0, p = t;
  for (int j = 1; j <= order; ++j) {
    if (j > 1) {
      const double next = ((2.0 * j - 1.0) * t * p - (j - 1.0) * p_prev) / j;
      p_prev = p;
      p = next;
    }
    out[static_cast<std::size_t>(j - 1)] = std::sqrt(2.0 * j + 1.0) * p;
  }
}

struct SmoothResult {
  std::vector<double> components;  // b_j = n^(-1/2) sum_i phi_j(y_i)
  int order;                       // selected k
  double statistic;                // sum_{j <= k} b_j^2
};

// Components up to max_order, with the order chosen as the smallest maximizer
// of T_k - k log n (Schwarz rule).
inline SmoothResult smooth_components(std::span<const double> y, int max_order = kDefaultSmoothOrder) {
  if (max_order < 1) throw invalid_input("smooth: max order must be >= 1");
  const std::size_t n = y.size();
  std::vector<double> sums(static_cast<std::size_t>(max_order), 0.0), phi(static_cast<std::size_t>(max_order));
  for (double u : y) {
    legendre_orthonormal(u, max_order, phi);
    for (std::size_t j = 0; j < phi.size(); ++j) sums[j] += phi[j];
  }
  const double root_n = std::sqrt(static_cast<double>(n));
  const double log_n = std::log(static_cast<double>(n));
  SmoothResult r{std::vector<double>(sums.size()), 1, 0.0};
  double t = 0.0, best = -INFINITY;
  for (std::size_t j = 0; j < sums.size(); ++j) {
    r.components[j] = sums[j] / root_n;
    t += r.components[j] * r.components[j];
    const double penalized = t - static_cast<double>(j + 1) * log_n;
    if (penalized > best) {
      best = penalized;
      r.order = static_cast<int>(j + 1);
      r.statistic = t;
    }
  }
  return r;
}

inline double smooth(std::span<const double> y, int max_order = kDefaultSmoothOrder) {
  return smooth_components(y, max_order).statistic;
}

// --- Dispatch ---------------------------------------------------------------

// Evaluates every method for sorted data against a model whose parameters are
// final. out must have methods.size() entries.
inline void evaluate_statistics(std::span<const double> sorted, const NullModel& fitted,
                                std::span<const MethodId> methods, const StatConfig& config,
                                std::span<double> out) {
  std::vector<double> y(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) y[i] = fitted.cdf(sorted[i]);
  // Guard against CDF round-off breaking the ordering.
  for (std::size_t i = 1; i < y.size(); ++i) y[i] = std::max(y[i], y[i - 1]);
  for (std::size_t k = 0; k < methods.size(); ++k) {
    double v = 0.0;
    switch (methods[k]) {
      case MethodId::KS: v = ks(y); break;
      case MethodId::AD: v = ad(y); break;
      case MethodId::CdM: v = cdm(y); break;
      case MethodId::W: v = watson(y); break;
      case MethodId::ZA: v = za(y); break;
      case MethodId::ZK: v = zk(y); break;
      case MethodId::ZC: v = zc(y); break;
      case MethodId::RGd:
        v = chisq_fitted(sorted, fitted, binning_spec(BinningVariant::RGd, fitted.estimated_count()));
        break;
      case MethodId::EqualSize:
        v = chisq_fitted(sorted, fitted, binning_spec(BinningVariant::EqualSize, 0, config.nbins));
        break;
      case MethodId::EqualProb:
        v = chisq_fitted(sorted, fitted, binning_spec(BinningVariant::EqualProb, 0, config.nbins));
        break;
      case MethodId::ppcc: v = ppcc(sorted, fitted); break;
      case MethodId::JB: v = jb(sorted); break;
      case MethodId::SW: v = sw(sorted); break;
      case MethodId::sNor:
      case MethodId::sUnif:
      case MethodId::sExp: v = smooth(y, config.smooth_max_order); break;
    }
    if (!std::isfinite(v))
      throw invalid_input("statistic " + std::string(method_name(methods[k])) + " is not finite");
    out[k] = v;
  }
}

// Sorts (and un-bins) the sample, re-estimates parameters when enabled, and
// computes every configured method in the order given.
inline StatVector compute_stat_vector(const Sample& sample, const NullModel& model, const StatConfig& config) {
  std::vector<double> x = to_points(sample, model);
  if (x.empty()) throw invalid_input("empty sample");
  std::sort(x.begin(), x.end());
  StatVector sv{config.methods, std::vector<double>(config.methods.size())};
  if (sv.empty()) return sv;
  const NullModel fitted = model.fitted(x);
  evaluate_statistics(x, fitted, sv.methods, config, sv.values);
  return sv;
}

}  // namespace gofsim
