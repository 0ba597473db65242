#pragma once

// Null-hypothesis distribution families and the NullModel value type.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/math/policies/policy.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "gofsim/error.hpp"
#include "gofsim/rng.hpp"

namespace gofsim {

namespace detail {

using MathPolicy = boost::math::policies::policy<
    boost::math::policies::overflow_error<boost::math::policies::ignore_error>>;

inline double clamp_unit(double u) { return std::clamp(u, 0.0, 1.0); }

inline double mean_of(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

inline void require_estimable(std::span<const double> data) {
  if (data.size() < 2) throw estimation_error("need at least 2 observations to estimate parameters");
  auto [lo, hi] = std::minmax_element(data.begin(), data.end());
  if (*lo == *hi) throw estimation_error("degenerate data: all observations are equal");
}

// Minimizes a unimodal function on [lo, hi]; stops when the bracket is narrower than tol.
template <typename Fn>
double golden_section_minimize(Fn&& f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

inline double sample_gamma(double shape, double rate, RngStream& rng) {
  std::gamma_distribution<double> g(shape, 1.0 / rate);
  return g(rng);
}

}  // namespace detail

// Behaviour of one distribution family, parameterized by a real vector.
// Implement this to add a custom null distribution.
class Distribution {
 public:
  virtual ~Distribution() = default;

  virtual std::string_view name() const = 0;
  virtual std::size_t arity() const = 0;
  // Throws invalid_input for out-of-domain parameters.
  virtual void validate(std::span<const double> params) const = 0;

  virtual double cdf(double x, std::span<const double> params) const = 0;
  virtual bool has_quantile() const { return true; }
  virtual double quantile(double u, std::span<const double> params) const = 0;
  virtual void sample(std::span<double> out, std::span<const double> params, RngStream& rng) const = 0;

  // Number of parameters re-estimated from data; 0 means estimation is unsupported.
  virtual std::size_t estimated_count() const { return 0; }
  virtual std::vector<double> estimate(std::span<const double> data,
                                       std::span<const double> current) const {
    (void)data;
    (void)current;
    throw invalid_input(std::string(name()) + ": parameter estimation is not supported");
  }
  // Extra checks applied when estimation is requested.
  virtual void validate_for_estimation(std::span<const double> params) const { (void)params; }
};

class NormalDistribution final : public Distribution {
 public:
  std::string_view name() const override { return "normal"; }
  std::size_t arity() const override { return 2; }
  void validate(std::span<const double> p) const override {
    if (!(p[1] > 0.0) || !std::isfinite(p[0]) || !std::isfinite(p[1]))
      throw invalid_input("normal: sd must be positive and finite");
  }
  double cdf(double x, std::span<const double> p) const override {
    return 0.5 * std::erfc(-(x - p[0]) / (p[1] * std::sqrt(2.0)));
  }
  double quantile(double u, std::span<const double> p) const override {
    if (u <= 0.0) return -INFINITY;
    if (u >= 1.0) return INFINITY;
    return p[0] - p[1] * std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u, detail::MathPolicy());
  }
  void sample(std::span<double> out, std::span<const double> p, RngStream& rng) const override {
    std::normal_distribution<double> d(p[0], p[1]);
    for (double& v : out) v = d(rng);
  }
  std::size_t estimated_count() const override { return 2; }
  // Maximum likelihood: sample mean and the 1/n standard deviation.
  std::vector<double> estimate(std::span<const double> x, std::span<const double>) const override {
    detail::require_estimable(x);
    const double mean = detail::mean_of(x);
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(x.size()));
    if (!(sd > 0.0)) throw estimation_error("normal: zero variance");
    return {mean, sd};
  }
};

class UniformDistribution final : public Distribution {
 public:
  std::string_view name() const override { return "uniform"; }
  std::size_t arity() const override { return 2; }
  void validate(std::span<const double> p) const override {
    if (!(p[0] < p[1]) || !std::isfinite(p[0]) || !std::isfinite(p[1]))
      throw invalid_input("uniform: need finite a < b");
  }
  double cdf(double x, std::span<const double> p) const override {
    return detail::clamp_unit((x - p[0]) / (p[1] - p[0]));
  }
  double quantile(double u, std::span<const double> p) const override {
    return p[0] + (p[1] - p[0]) * detail::clamp_unit(u);
  }
  void sample(std::span<double> out, std::span<const double> p, RngStream& rng) const override {
    for (double& v : out) v = p[0] + (p[1] - p[0]) * rng.uniform_open();
  }
};

class ExponentialDistribution final : public Distribution {
 public:
  std::string_view name() const override { return "exponential"; }
  std::size_t arity() const override { return 1; }
  void validate(std::span<const double> p) const override {
    if (!(p[0] > 0.0) || !std::isfinite(p[0])) throw invalid_input("exponential: rate must be positive");
  }
  double cdf(double x, std::span<const double> p) const override {
    return x <= 0.0 ? 0.0 : -std::expm1(-p[0] * x);
  }
  double quantile(double u, std::span<const double> p) const override {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return INFINITY;
    return -std::log1p(-u) / p[0];
  }
  void sample(std::span<double> out, std::span<const double> p, RngStream& rng) const override {
    std::exponential_distribution<double> d(p[0]);
    for (double& v : out) v = d(rng);
  }
  std::size_t estimated_count() const override { return 1; }
  std::vector<double> estimate(std::span<const double> x, std::span<const double>) const override {
    detail::require_estimable(x);
    const double mean = detail::mean_of(x);
    if (!(mean > 0.0)) throw estimation_error("exponential: sample mean must be positive");
    return {1.0 / mean};
  }
};

// Exponential(rate) truncated to [L, R]; params = (rate, L, R). Only the rate is estimated.
class TruncatedExponentialDistribution final : public Distribution {
 public:
  static constexpr double kRateLo = 1e-6;
  static constexpr double kRateHi = 1e3;
  static constexpr double kTolerance = 1e-9;

  std::string_view name() const override { return "truncexp"; }
  std::size_t arity() const override { return 3; }
  void validate(std::span<const double> p) const override {
    if (!(p[0] > 0.0) || !std::isfinite(p[0])) throw invalid_input("truncexp: rate must be positive");
    if (!(p[1] < p[2]) || !std::isfinite(p[1]) || !std::isfinite(p[2]))
      throw invalid_input("truncexp: need finite L < R");
  }
  double cdf(double x, std::span<const double> p) const override {
    if (x <= p[1]) return 0.0;
    if (x >= p[2]) return 1.0;
    return std::expm1(-p[0] * (x - p[1])) / std::expm1(-p[0] * (p[2] - p[1]));
  }
  double quantile(double u, std::span<const double> p) const override {
    u = detail::clamp_unit(u);
    double x = p[1] - std::log1p(u * std::expm1(-p[0] * (p[2] - p[1]))) / p[0];
    return std::clamp(x, p[1], p[2]);
  }
  void sample(std::span<double> out, std::span<const double> p, RngStream& rng) const override {
    for (double& v : out) v = quantile(rng.uniform_open(), p);
  }
  std::size_t estimated_count() const override { return 1; }
  std::vector<double> estimate(std::span<const double> x, std::span<const double> current) const override {
    detail::require_estimable(x);
    const double lo = current[1], hi = current[2];
    double shifted = 0.0;
    for (double v : x) {
      if (v < lo || v > hi) throw estimation_error("truncexp: observation outside [L, R]");
      shifted += v - lo;
    }
    const double n = static_cast<double>(x.size());
    const double width = hi - lo;
    auto neg_loglik = [&](double rate) {
      return -(n * std::log(rate) - rate * shifted - n * std::log(-std::expm1(-rate * width)));
    };
    double rate = detail::golden_section_minimize(neg_loglik, kRateLo, kRateHi, kTolerance);
    return {rate, lo, hi};
  }
};

class BetaDistribution final : public Distribution {
 public:
  std::string_view name() const override { return "beta"; }
  std::size_t arity() const override { return 2; }
  void validate(std::span<const double> p) const override {
    if (!(p[0] > 0.0) || !(p[1] > 0.0) || !std::isfinite(p[0]) || !std::isfinite(p[1]))
      throw invalid_input("beta: shape parameters must be positive");
  }
  void validate_for_estimation(std::span<const double> p) const override {
    if (p[0] != 1.0) throw invalid_input("beta: estimation is supported for Beta(1, b) only");
  }
  double cdf(double x, std::span<const double> p) const override {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return boost::math::ibeta(p[0], p[1], x, detail::MathPolicy());
  }
  double quantile(double u, std::span<const double> p) const override {
    u = detail::clamp_unit(u);
    return boost::math::ibeta_inv(p[0], p[1], u, detail::MathPolicy());
  }
  void sample(std::span<double> out, std::span<const double> p, RngStream& rng) const override {
    for (double& v : out) {
      double a = detail::sample_gamma(p[0], 1.0, rng);
      double b = detail::sample_gamma(p[1], 1.0, rng);
      v = a / (a + b);
    }
  }
  std::size_t estimated_count() const override { return 1; }
  // MLE of b for Beta(1, b): b = -n / sum(log(1 - x)).
  std::vector<double> estimate(std::span<const double> x, std::span<const double>) const override {
    detail::require_estimable(x);
    double s = 0.0;
    for (double v : x) {
      if (!(v > 0.0 && v < 1.0)) throw estimation_error("beta: observation outside (0, 1)");
      s += std::log1p(-v);
    }
    return {1.0, -static_cast<double>(x.size()) / s};
  }
};

// Gamma(shape, rate).
class GammaDistribution : public Distribution {
 public:
  std::string_view name() const override { return "gamma"; }
  std::size_t arity() const override { return 2; }
  void validate(std::span<const double> p) const override {
    if (!(p[0] > 0.0) || !(p[1] > 0.0) || !std::isfinite(p[0]) || !std::isfinite(p[1]))
      throw invalid_input(std::string(name()) + ": shape and rate must be positive");
  }
  double cdf(double x, std::span<const double> p) const override {
    if (x <= 0.0) return 0.0;
    return boost::math::gamma_p(p[0], p[1] * x, detail::MathPolicy());
  }
  double quantile(double u, std::span<const double> p) const override {
    u = detail::clamp_unit(u);
    if (u >= 1.0) return INFINITY;
    return boost::math::gamma_p_inv(p[0], u, detail::MathPolicy()) / p[1];
  }
  void sample(std::span<double> out, std::span<const double> p, RngStream& rng) const override {
    std::gamma_distribution<double> d(p[0], 1.0 / p[1]);
    for (double& v : out) v = d(rng);
  }
};

// Erlang(k, rate): a Gamma with positive integer shape, fitted by the method of moments.
class ErlangDistribution final : public GammaDistribution {
 public:
  std::string_view name() const override { return "erlang"; }
  void validate(std::span<const double> p) const override {
    GammaDistribution::validate(p);
    if (p[0] != std::round(p[0])) throw invalid_input("erlang: shape must be a positive integer");
  }
  std::size_t estimated_count() const override { return 2; }
  std::vector<double> estimate(std::span<const double> x, std::span<const double>) const override {
    detail::require_estimable(x);
    const double mean = detail::mean_of(x);
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    const double var = ss / static_cast<double>(x.size());
    if (!(mean > 0.0) || !(var > 0.0)) throw estimation_error("erlang: need positive mean and variance");
    const double shape = std::max(1.0, std::round(mean * mean / var));
    return {shape, shape / mean};
  }
};

// The null hypothesis: a family, its current parameters and whether the
// parameters are re-estimated from each sample. Immutable; cheap to copy.
class NullModel {
 public:
  NullModel(std::shared_ptr<const Distribution> family, std::vector<double> params, bool estimate_params)
      : family_(std::move(family)), params_(std::move(params)), estimate_(estimate_params) {
    if (!family_) throw invalid_input("null model: missing family");
    if (params_.size() != family_->arity())
      throw invalid_input(std::string(family_->name()) + ": expected " + std::to_string(family_->arity()) +
                          " parameters, got " + std::to_string(params_.size()));
    family_->validate(params_);
    if (estimate_) {
      if (family_->estimated_count() == 0)
        throw invalid_input(std::string(family_->name()) + ": parameter estimation is not supported");
      family_->validate_for_estimation(params_);
    }
  }

  std::string_view family() const { return family_->name(); }
  const Distribution& distribution() const { return *family_; }
  std::span<const double> params() const { return params_; }
  bool estimates_params() const { return estimate_; }
  // m, the number of parameters estimated from the data (0 when fixed).
  std::size_t estimated_count() const { return estimate_ ? family_->estimated_count() : 0; }

  double cdf(double x) const { return family_->cdf(x, params_); }
  bool has_quantile() const { return family_->has_quantile(); }
  double quantile(double u) const { return family_->quantile(u, params_); }

  std::vector<double> sample(std::size_t n, RngStream& rng) const {
    std::vector<double> out(n);
    family_->sample(out, params_, rng);
    return out;
  }

  // Parameters fitted to data. Requires estimates_params().
  std::vector<double> estimate(std::span<const double> data) const {
    if (!estimate_) throw invalid_input(std::string(family()) + ": estimation is not enabled");
    auto p = family_->estimate(data, params_);
    for (double v : p)
      if (!std::isfinite(v)) throw estimation_error(std::string(family()) + ": non-finite estimate");
    try {
      family_->validate(p);
    } catch (const Error& e) {
      throw estimation_error(std::string("estimate out of range: ") + e.what());
    }
    return p;
  }

  // The model with parameters re-estimated from data, or itself when parameters are fixed.
  NullModel fitted(std::span<const double> data) const {
    if (!estimate_) return *this;
    return with_params(estimate(data));
  }

  NullModel with_params(std::vector<double> params) const {
    return NullModel(family_, std::move(params), estimate_);
  }

 private:
  std::shared_ptr<const Distribution> family_;
  std::vector<double> params_;
  bool estimate_;
};

inline std::shared_ptr<const Distribution> find_family(std::string_view name) {
  if (name == "normal") return std::make_shared<NormalDistribution>();
  if (name == "uniform") return std::make_shared<UniformDistribution>();
  if (name == "exponential") return std::make_shared<ExponentialDistribution>();
  if (name == "truncexp") return std::make_shared<TruncatedExponentialDistribution>();
  if (name == "beta") return std::make_shared<BetaDistribution>();
  if (name == "gamma") return std::make_shared<GammaDistribution>();
  if (name == "erlang") return std::make_shared<ErlangDistribution>();
  throw invalid_input("unknown null family '" + std::string(name) + "'");
}

inline std::vector<std::string> null_family_names() {
  return {"normal", "uniform", "exponential", "truncexp", "beta", "gamma", "erlang"};
}

// Parameters used when none are given on the command line.
inline std::vector<double> default_null_params(std::string_view family) {
  if (family == "normal" || family == "uniform") return {0.0, 1.0};
  if (family == "exponential") return {1.0};
  if (family == "truncexp") return {1.0, 0.0, 1.0};
  if (family == "beta" || family == "gamma" || family == "erlang") return {1.0, 1.0};
  throw invalid_input("unknown null family '" + std::string(family) + "'");
}

inline NullModel make_null_model(std::string_view family, std::vector<double> params, bool estimate) {
  return NullModel(find_family(family), std::move(params), estimate);
}

inline std::vector<double> estimate(const NullModel& model, std::span<const double> data) {
  return model.estimate(data);
}

}  // namespace gofsim
