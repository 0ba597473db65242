#pragma once

// Data-generating distributions for power studies.

#include <cmath>
#include <cstddef>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/non_central_beta.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "gofsim/error.hpp"
#include "gofsim/model.hpp"
#include "gofsim/rng.hpp"

namespace gofsim {

enum class AlternativeKind {
  StudentT,        // (df)
  Beta,            // (a, b)
  NoncentralBeta,  // (a, b, ncp)
  Gamma,           // (shape, rate)
  Linear,          // (s): f(x) = 2 s x + 1 - s on [0, 1]
  Quadratic,       // (a): f(x) = 3 a (x - 1/2)^2 + 1 - a/4 on [0, 1]
  ExpBump,         // (sigma, weight): weight*Exp(1) + (1-weight)*N(1.5, sigma) truncated to x > 0
  InversePower,    // (a): f(x) = a / (1 + x)^(a + 1), x > 0
  TruncExponential // (rate, L, R)
};

inline constexpr double kDefaultBumpExpWeight = 0.9;

struct AlternativeSpec {
  AlternativeKind kind;
  std::vector<double> params;
};

inline std::string_view alternative_name(AlternativeKind k) {
  switch (k) {
    case AlternativeKind::StudentT: return "t";
    case AlternativeKind::Beta: return "beta";
    case AlternativeKind::NoncentralBeta: return "ncbeta";
    case AlternativeKind::Gamma: return "gamma";
    case AlternativeKind::Linear: return "linear";
    case AlternativeKind::Quadratic: return "quadratic";
    case AlternativeKind::ExpBump: return "expbump";
    case AlternativeKind::InversePower: return "invpower";
    case AlternativeKind::TruncExponential: return "truncexp";
  }
  return "?";
}

namespace detail {

inline void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw invalid_input(std::string(what) + " must be positive and finite");
}

inline void validate_alternative(const AlternativeSpec& spec) {
  const auto& p = spec.params;
  auto need = [&](std::size_t count) {
    if (p.size() != count)
      throw invalid_input(std::string(alternative_name(spec.kind)) + ": expected " + std::to_string(count) +
                          " parameters, got " + std::to_string(p.size()));
  };
  switch (spec.kind) {
    case AlternativeKind::StudentT:
      need(1);
      require_positive(p[0], "t: df");
      break;
    case AlternativeKind::Beta:
      need(2);
      require_positive(p[0], "beta: a");
      require_positive(p[1], "beta: b");
      break;
    case AlternativeKind::NoncentralBeta:
      need(3);
      require_positive(p[0], "ncbeta: a");
      require_positive(p[1], "ncbeta: b");
      if (!(p[2] >= 0.0) || !std::isfinite(p[2])) throw invalid_input("ncbeta: ncp must be >= 0");
      break;
    case AlternativeKind::Gamma:
      need(2);
      require_positive(p[0], "gamma: shape");
      require_positive(p[1], "gamma: rate");
      break;
    case AlternativeKind::Linear:
      need(1);
      if (!(std::abs(p[0]) <= 1.0)) throw invalid_input("linear: density is negative unless |s| <= 1");
      break;
    case AlternativeKind::Quadratic:
      need(1);
      if (!(p[0] >= -2.0 && p[0] <= 4.0)) throw invalid_input("quadratic: density is negative unless -2 <= a <= 4");
      break;
    case AlternativeKind::ExpBump:
      need(2);
      require_positive(p[0], "expbump: sigma");
      if (!(p[1] >= 0.0 && p[1] <= 1.0)) throw invalid_input("expbump: weight must lie in [0, 1]");
      break;
    case AlternativeKind::InversePower:
      need(1);
      require_positive(p[0], "invpower: a");
      break;
    case AlternativeKind::TruncExponential:
      need(3);
      TruncatedExponentialDistribution().validate(p);
      break;
  }
}

}  // namespace detail

// Builds and validates a spec. expbump accepts (sigma) and fills in the default weight.
inline AlternativeSpec make_alternative(std::string_view family, std::vector<double> params) {
  AlternativeSpec spec{AlternativeKind::StudentT, std::move(params)};
  if (family == "t") spec.kind = AlternativeKind::StudentT;
  else if (family == "beta") spec.kind = AlternativeKind::Beta;
  else if (family == "ncbeta") spec.kind = AlternativeKind::NoncentralBeta;
  else if (family == "gamma") spec.kind = AlternativeKind::Gamma;
  else if (family == "linear") spec.kind = AlternativeKind::Linear;
  else if (family == "quadratic") spec.kind = AlternativeKind::Quadratic;
  else if (family == "expbump") {
    spec.kind = AlternativeKind::ExpBump;
    if (spec.params.size() == 1) spec.params.push_back(kDefaultBumpExpWeight);
  } else if (family == "invpower") spec.kind = AlternativeKind::InversePower;
  else if (family == "truncexp") spec.kind = AlternativeKind::TruncExponential;
  else throw invalid_input("unknown alternative family '" + std::string(family) + "'");
  detail::validate_alternative(spec);
  return spec;
}

inline double linear_quantile(double s, double u) {
  // Root of s x^2 + (1 - s) x = u, written to stay stable as s -> 0.
  return 2.0 * u / ((1.0 - s) + std::sqrt((1.0 - s) * (1.0 - s) + 4.0 * s * u));
}

inline double alternative_density(const AlternativeSpec& spec, double x) {
  const auto& p = spec.params;
  switch (spec.kind) {
    case AlternativeKind::StudentT:
      return boost::math::pdf(boost::math::students_t(p[0]), x);
    case AlternativeKind::Beta:
      return (x < 0.0 || x > 1.0) ? 0.0 : boost::math::pdf(boost::math::beta_distribution<>(p[0], p[1]), x);
    case AlternativeKind::NoncentralBeta:
      return (x < 0.0 || x > 1.0) ? 0.0
                                  : boost::math::pdf(boost::math::non_central_beta(p[0], p[1], p[2]), x);
    case AlternativeKind::Gamma:
      return x < 0.0 ? 0.0 : boost::math::pdf(boost::math::gamma_distribution<>(p[0], 1.0 / p[1]), x);
    case AlternativeKind::Linear:
      return (x < 0.0 || x > 1.0) ? 0.0 : 2.0 * p[0] * x + 1.0 - p[0];
    case AlternativeKind::Quadratic:
      return (x < 0.0 || x > 1.0) ? 0.0 : 3.0 * p[0] * (x - 0.5) * (x - 0.5) + 1.0 - p[0] / 4.0;
    case AlternativeKind::ExpBump: {
      if (x <= 0.0) return 0.0;
      boost::math::normal bump(1.5, p[0]);
      double truncated = boost::math::pdf(bump, x) / boost::math::cdf(boost::math::complement(bump, 0.0));
      return p[1] * std::exp(-x) + (1.0 - p[1]) * truncated;
    }
    case AlternativeKind::InversePower:
      return x < 0.0 ? 0.0 : p[0] / std::pow(1.0 + x, p[0] + 1.0);
    case AlternativeKind::TruncExponential: {
      if (x < p[1] || x > p[2]) return 0.0;
      return p[0] * std::exp(-p[0] * (x - p[1])) / -std::expm1(-p[0] * (p[2] - p[1]));
    }
  }
  return 0.0;
}

inline std::vector<double> sample_alternative(const AlternativeSpec& spec, std::size_t n, RngStream& rng) {
  const auto& p = spec.params;
  std::vector<double> out(n);
  switch (spec.kind) {
    case AlternativeKind::StudentT: {
      std::student_t_distribution<double> d(p[0]);
      for (double& v : out) v = d(rng);
      break;
    }
    case AlternativeKind::Beta:
      BetaDistribution().sample(out, p, rng);
      break;
    case AlternativeKind::NoncentralBeta: {
      // Poisson(ncp/2) mixture of Beta(a + J, b).
      std::poisson_distribution<long> pois(p[2] / 2.0);
      for (double& v : out) {
        long j = p[2] > 0.0 ? pois(rng) : 0;
        double a = detail::sample_gamma(p[0] + static_cast<double>(j), 1.0, rng);
        double b = detail::sample_gamma(p[1], 1.0, rng);
        v = a / (a + b);
      }
      break;
    }
    case AlternativeKind::Gamma:
      GammaDistribution().sample(out, p, rng);
      break;
    case AlternativeKind::Linear:
      for (double& v : out) v = linear_quantile(p[0], rng.uniform_open());
      break;
    case AlternativeKind::Quadratic: {
      const double a = p[0];
      const double fmax = std::max(1.0 + a / 2.0, 1.0 - a / 4.0);
      for (double& v : out) {
        for (;;) {
          double x = rng.uniform_open();
          double f = 3.0 * a * (x - 0.5) * (x - 0.5) + 1.0 - a / 4.0;
          if (rng.uniform_open() * fmax <= f) {
            v = x;
            break;
          }
        }
      }
      break;
    }
    case AlternativeKind::ExpBump: {
      std::exponential_distribution<double> e(1.0);
      std::normal_distribution<double> bump(1.5, p[0]);
      for (double& v : out) {
        if (rng.uniform_open() < p[1]) {
          v = e(rng);
        } else {
          do v = bump(rng);
          while (v <= 0.0);
        }
      }
      break;
    }
    case AlternativeKind::InversePower:
      for (double& v : out) v = std::pow(rng.uniform_open(), -1.0 / p[0]) - 1.0;
      break;
    case AlternativeKind::TruncExponential:
      TruncatedExponentialDistribution().sample(out, p, rng);
      break;
  }
  return out;
}

}  // namespace gofsim
