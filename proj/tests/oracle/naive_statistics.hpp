#pragma once

// Literal, unoptimized transcriptions of the statistic formulas, written
// 1-based and without sharing any code with the library. Used only as an
// independent oracle in tests.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <boost/math/special_functions/legendre.hpp>

namespace oracle {

// y[1..n] stored in y[0..n-1]; Y(i) is 1-based access.
struct OneBased {
  const std::vector<double>& v;
  double operator()(int i) const { return v[static_cast<std::size_t>(i - 1)]; }
};

inline double ks(const std::vector<double>& y) {
  OneBased Y{y};
  const int n = static_cast<int>(y.size());
  double best = -1.0;
  for (int i = 1; i <= n; ++i) {
    best = std::max(best, double(i) / n - Y(i));
    best = std::max(best, Y(i) - double(i - 1) / n);
  }
  return best;
}

inline double ad(const std::vector<double>& y) {
  OneBased Y{y};
  const int n = static_cast<int>(y.size());
  double s = 0.0;
  for (int i = 1; i <= n; ++i) s += (2.0 * i - 1.0) * (std::log(Y(i)) + std::log(1.0 - Y(n + 1 - i)));
  return -n - s / n;
}

inline double cm(const std::vector<double>& y) {
  OneBased Y{y};
  const int n = static_cast<int>(y.size());
  double s = 1.0 / (12.0 * n);
  for (int i = 1; i <= n; ++i) s += std::pow((2.0 * i - 1.0) / (2.0 * n) - Y(i), 2);
  return s;
}

inline double watson(const std::vector<double>& y) {
  const int n = static_cast<int>(y.size());
  double mean = 0.0;
  for (double v : y) mean += v / n;
  return cm(y) - n * std::pow(mean - 0.5, 2);
}

inline double zk(const std::vector<double>& y) {
  OneBased Y{y};
  const int n = static_cast<int>(y.size());
  double best = -HUGE_VAL;
  for (int i = 1; i <= n; ++i) {
    double t = (i - 0.5) * std::log((i - 0.5) / (n * Y(i))) +
               (n - i + 0.5) * std::log((n - i + 0.5) / (n * (1.0 - Y(i))));
    best = std::max(best, t);
  }
  return best;
}

inline double za(const std::vector<double>& y) {
  OneBased Y{y};
  const int n = static_cast<int>(y.size());
  double s = 0.0;
  for (int i = 1; i <= n; ++i) s += std::log(Y(i)) / (n - i + 0.5) + std::log(1.0 - Y(i)) / (i - 0.5);
  return -s;
}

inline double zc(const std::vector<double>& y) {
  OneBased Y{y};
  const int n = static_cast<int>(y.size());
  double s = 0.0;
  for (int i = 1; i <= n; ++i) s += std::pow(std::log((1.0 / Y(i) - 1.0) / ((n - 0.5) / (i - 0.75) - 1.0)), 2);
  return s;
}

inline double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double sa = 0, sb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sa += a[i];
    sb += b[i];
  }
  const double ma = sa / n, mb = sb / n;
  double cov = 0, va = 0, vb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cov += (a[i] - ma) * (b[i] - mb);
    va += std::pow(a[i] - ma, 2);
    vb += std::pow(b[i] - mb, 2);
  }
  return cov / std::sqrt(va) / std::sqrt(vb);
}

inline double ppcc(const std::vector<double>& x_sorted, const std::function<double(double)>& quantile) {
  const int n = static_cast<int>(x_sorted.size());
  const double a = n <= 10 ? 0.375 : 0.5;
  std::vector<double> q;
  for (int i = 1; i <= n; ++i) q.push_back(quantile((i - a) / (n + 1 - 2 * a)));
  return 1.0 - correlation(x_sorted, q);
}

inline double jb(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  double mu = 0;
  for (double v : x) mu += v;
  mu /= n;
  auto moment = [&](int k) {
    double s = 0;
    for (double v : x) s += std::pow(v - mu, k);
    return s / n;
  };
  const double S = moment(3) / std::pow(moment(2), 1.5);
  const double K = moment(4) / std::pow(moment(2), 2);
  return n / 6.0 * (S * S + std::pow(K - 3.0, 2) / 4.0);
}

// Shapiro-Wilk W in the correlation form of algorithm AS R94, coefficients
// recomputed here from Royston's polynomial approximations.
inline double sw(const std::vector<double>& x, const std::function<double(double)>& qnorm) {
  const int n = static_cast<int>(x.size());
  const int nn2 = n / 2;
  std::vector<double> a(nn2 + 1, 0.0);  // 1-based
  if (n == 3) {
    a[1] = std::sqrt(0.5);
  } else {
    const double c1[6] = {0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056};
    const double c2[6] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
    std::vector<double> m(nn2 + 1);
    double summ2 = 0;
    for (int i = 1; i <= nn2; ++i) {
      m[i] = qnorm((i - 0.375) / (n + 0.25));
      summ2 += m[i] * m[i];
    }
    summ2 *= 2;
    const double ssumm2 = std::sqrt(summ2), rsn = 1.0 / std::sqrt(double(n));
    auto poly = [&](const double* c) {
      double r = 0;
      for (int k = 0; k < 6; ++k) r += c[k] * std::pow(rsn, k);
      return r;
    };
    const double a1 = poly(c1) - m[1] / ssumm2;
    int i1;
    double fac;
    if (n > 5) {
      i1 = 3;
      const double a2 = -m[2] / ssumm2 + poly(c2);
      fac = std::sqrt((summ2 - 2 * m[1] * m[1] - 2 * m[2] * m[2]) / (1 - 2 * a1 * a1 - 2 * a2 * a2));
      a[2] = a2;
    } else {
      i1 = 2;
      fac = std::sqrt((summ2 - 2 * m[1] * m[1]) / (1 - 2 * a1 * a1));
    }
    a[1] = a1;
    for (int i = i1; i <= nn2; ++i) a[i] = -m[i] / fac;
  }
  // Full antisymmetric coefficient vector, then W = cor(a, x)^2.
  std::vector<double> full(n, 0.0);
  for (int i = 1; i <= nn2; ++i) {
    full[i - 1] = -a[i];
    full[n - i] = a[i];
  }
  const double r = correlation(full, x);
  return 1.0 - r * r;
}

// Legendre components via boost::math::legendre_p and Schwarz order selection.
inline double smooth(const std::vector<double>& y, int max_order) {
  const double n = static_cast<double>(y.size());
  double best = -HUGE_VAL, stat = 0, t = 0;
  for (int j = 1; j <= max_order; ++j) {
    double s = 0;
    for (double u : y) s += std::sqrt(2.0 * j + 1.0) * boost::math::legendre_p(j, 2.0 * u - 1.0);
    t += s * s / n;
    if (t - j * std::log(n) > best) {
      best = t - j * std::log(n);
      stat = t;
    }
  }
  return stat;
}

}  // namespace oracle
