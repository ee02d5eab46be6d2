// Copyright 2026 The statlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// The eighteen distributions: densities/masses, CDFs, survival functions,
// quantiles, moments, tail-probability queries and plot data.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "statlab/display.hpp"
#include "statlab/error.hpp"
#include "statlab/specfun.hpp"

namespace statlab::dist {

using specfun::kInf;

enum class Family {
  kBeta,
  kBinomial,
  kCauchy,
  kChiSquare,
  kExponential,
  kFisher,
  kGamma,
  kGeometricTrials,
  kGeometricFailures,
  kHypergeometric,
  kLogistic,
  kLogNormal,
  kNegBinomialSizeProb,
  kNegBinomialMeanSize,
  kNormal,
  kPoisson,
  kStudentT,
  kWeibull,
};

inline constexpr Family kAllFamilies[] = {
    Family::kBeta,           Family::kBinomial,
    Family::kCauchy,         Family::kChiSquare,
    Family::kExponential,    Family::kFisher,
    Family::kGamma,          Family::kGeometricFailures,
    Family::kGeometricTrials, Family::kHypergeometric,
    Family::kLogistic,       Family::kLogNormal,
    Family::kNegBinomialMeanSize, Family::kNegBinomialSizeProb,
    Family::kNormal,         Family::kPoisson,
    Family::kStudentT,       Family::kWeibull,
};

/// Stable lowercase identifiers used by the API and CLI.
inline constexpr std::string_view tag(Family f) {
  switch (f) {
    case Family::kBeta: return "beta";
    case Family::kBinomial: return "binomial";
    case Family::kCauchy: return "cauchy";
    case Family::kChiSquare: return "chi_square";
    case Family::kExponential: return "exponential";
    case Family::kFisher: return "fisher";
    case Family::kGamma: return "gamma";
    case Family::kGeometricTrials: return "geometric_trials";
    case Family::kGeometricFailures: return "geometric_failures";
    case Family::kHypergeometric: return "hypergeometric";
    case Family::kLogistic: return "logistic";
    case Family::kLogNormal: return "log_normal";
    case Family::kNegBinomialSizeProb: return "negative_binomial_size_prob";
    case Family::kNegBinomialMeanSize: return "negative_binomial_mean_size";
    case Family::kNormal: return "normal";
    case Family::kPoisson: return "poisson";
    case Family::kStudentT: return "student_t";
    case Family::kWeibull: return "weibull";
  }
  return "";
}

inline std::optional<Family> family_from_tag(std::string_view name) {
  for (Family f : kAllFamilies) {
    if (tag(f) == name) return f;
  }
  return std::nullopt;
}

struct Moments {
  std::optional<double> mean;
  std::optional<double> sd;
  std::optional<double> variance;
};

namespace detail {

// Values that overflow a double are reported as absent.
inline Moments moments_from(double mean, double variance) {
  Moments m;
  if (std::isfinite(mean)) m.mean = mean;
  if (std::isfinite(variance) && variance >= 0.0) {
    m.variance = variance;
    m.sd = std::sqrt(variance);
  }
  return m;
}

inline bool is_integer(double x) {
  return std::isfinite(x) && x == std::floor(x);
}

// Loader's saddle-point pieces for accurate binomial/Poisson masses.
inline double stirlerr(double n) {
  if (n <= 0.0) return 0.0;
  if (n >= 10.0) return specfun::detail::stirling_correction(n);
  return specfun::log_gamma(n + 1.0) - (n + 0.5) * std::log(n) + n -
         specfun::kLnSqrt2Pi;
}

// x ln(x/m) + m - x.
inline double bd0(double x, double m) {
  // Homogeneous of degree one; halve the arguments if x + m overflows.
  if (std::isfinite(x) && std::isfinite(m) &&
      x + m > std::numeric_limits<double>::max()) {
    return 2.0 * bd0(0.5 * x, 0.5 * m);
  }
  if (std::fabs(x - m) < 0.1 * (x + m)) {
    double v = (x - m) / (x + m);
    double s = (x - m) * v;
    double ej = 2.0 * x * v;
    v *= v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v;
      const double s1 = s + ej / (2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
    return s;
  }
  if (x == 0.0) return m;
  const double r = x / m;
  const double log_r =
      r > 0.0 && std::isfinite(r) ? std::log(r) : std::log(x) - std::log(m);
  return x * log_r + m - x;
}

// C(n, x) p^x q^(n-x) for real n >= x >= 0.
inline double binom_raw(double x, double n, double p, double q) {
  if (p == 0.0) return x == 0.0 ? 1.0 : 0.0;
  if (q == 0.0) return x == n ? 1.0 : 0.0;
  if (x == 0.0) {
    if (n == 0.0) return 1.0;
    const double lc = p < 0.1 ? -bd0(n, n * q) - n * p : n * std::log(q);
    return std::exp(lc);
  }
  if (x == n) {
    const double lc = q < 0.1 ? -bd0(n, n * p) - n * q : n * std::log(p);
    return std::exp(lc);
  }
  if (x < 0.0 || x > n) return 0.0;
  const double lc = stirlerr(n) - stirlerr(x) - stirlerr(n - x) -
                    bd0(x, n * p) - bd0(n - x, n * q);
  const double lf =
      std::log(2.0 * std::numbers::pi) + std::log(x) + std::log1p(-x / n);
  return std::exp(lc - 0.5 * lf);
}

// λ^x e^{-λ} / x! for real x >= 0.
inline double poisson_raw(double x, double lambda) {
  if (x == 0.0) return std::exp(-lambda);
  if (x < 0.0) return 0.0;
  return std::exp(-stirlerr(x) - bd0(x, lambda)) /
         std::sqrt(2.0 * std::numbers::pi * x);
}

inline double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace detail

// --- Continuous families ---------------------------------------------------
//
// Each model exposes pdf (returning +inf at density poles), cdf, sf, moments,
// support limits and a starting guess for quantile inversion; closed-form
// quantiles are provided where they exist.

struct Beta {
  static constexpr Family kFamily = Family::kBeta;
  static constexpr bool kDiscrete = false;
  double alpha;
  double beta;

  double support_min() const { return 0.0; }
  double support_max() const { return 1.0; }
  double pdf(double x) const {
    if (x < 0.0 || x > 1.0) return 0.0;
    if (x == 0.0) return alpha < 1 ? kInf : (alpha == 1 ? beta : 0.0);
    if (x == 1.0) return beta < 1 ? kInf : (beta == 1 ? alpha : 0.0);
    const double y = 1.0 - x;
    return std::exp(specfun::detail::log_beta_prefix(alpha, beta, x, y)) /
           (x * y);
  }
  double cdf(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return specfun::reg_inc_beta(alpha, beta, x);
  }
  double sf(double x) const {
    if (x <= 0.0) return 1.0;
    if (x >= 1.0) return 0.0;
    return specfun::reg_inc_beta(beta, alpha, 1.0 - x, x);
  }
  Moments moments() const {
    const double mean = 1.0 / (1.0 + beta / alpha);
    const double complement = 1.0 / (1.0 + alpha / beta);
    return detail::moments_from(
        mean, mean * complement / (alpha + beta + 1.0));
  }
  double quantile_guess(double p) const {
    const auto m = moments();
    return std::clamp(*m.mean + *m.sd * specfun::normal_quantile_guess(p),
                      1e-3, 1 - 1e-3);
  }
};

struct Cauchy {
  static constexpr Family kFamily = Family::kCauchy;
  static constexpr bool kDiscrete = false;
  double location;
  double scale;

  double support_min() const { return -kInf; }
  double support_max() const { return kInf; }
  double pdf(double x) const {
    const double z = (x - location) / scale;
    return 1.0 / (std::numbers::pi * scale * (1.0 + z * z));
  }
  double cdf(double x) const {
    const double z = (x - location) / scale;
    if (z < -1.0) return -std::atan(1.0 / z) / std::numbers::pi;
    return 0.5 + std::atan(z) / std::numbers::pi;
  }
  double sf(double x) const { return Cauchy{-location, scale}.cdf(-x); }
  Moments moments() const { return {}; }
  double quantile(double p) const {
    if (p == 0.5) return location;
    return location + scale * std::tan(std::numbers::pi * (p - 0.5));
  }
};

struct Gamma {
  static constexpr Family kFamily = Family::kGamma;
  static constexpr bool kDiscrete = false;
  double shape;
  double rate;

  double support_min() const { return 0.0; }
  double support_max() const { return kInf; }
  double pdf(double x) const {
    if (x < 0.0) return 0.0;
    if (x == 0.0) return shape < 1 ? kInf : (shape == 1 ? rate : 0.0);
    if (std::isinf(x)) return 0.0;
    return std::exp(specfun::detail::log_gamma_prefix(shape, rate * x)) / x;
  }
  double cdf(double x) const {
    if (x <= 0.0) return 0.0;
    return specfun::reg_inc_gamma_lower(shape, rate * x);
  }
  double sf(double x) const {
    if (x <= 0.0) return 1.0;
    return specfun::reg_inc_gamma_upper(shape, rate * x);
  }
  Moments moments() const {
    return detail::moments_from(shape / rate, shape / (rate * rate));
  }
  double quantile_guess(double p) const {
    // Wilson–Hilferty on the equivalent chi-square.
    const double k = 2.0 * shape;
    const double z = specfun::normal_quantile_guess(p);
    const double c = 2.0 / (9.0 * k);
    const double w = 1.0 - c + z * std::sqrt(c);
    double chi = k * w * w * w;
    if (!(chi > 0.0)) chi = k * std::pow(p, 1.0 / shape);
    return chi / (2.0 * rate);
  }
};

struct ChiSquare {
  static constexpr Family kFamily = Family::kChiSquare;
  static constexpr bool kDiscrete = false;
  double df;

  Gamma as_gamma() const { return {0.5 * df, 0.5}; }
  double support_min() const { return 0.0; }
  double support_max() const { return kInf; }
  double pdf(double x) const { return as_gamma().pdf(x); }
  double cdf(double x) const { return as_gamma().cdf(x); }
  double sf(double x) const { return as_gamma().sf(x); }
  Moments moments() const { return detail::moments_from(df, 2.0 * df); }
  double quantile_guess(double p) const { return as_gamma().quantile_guess(p); }
};

struct Exponential {
  static constexpr Family kFamily = Family::kExponential;
  static constexpr bool kDiscrete = false;
  double rate;

  double support_min() const { return 0.0; }
  double support_max() const { return kInf; }
  double pdf(double x) const {
    return x < 0.0 ? 0.0 : rate * std::exp(-rate * x);
  }
  double cdf(double x) const {
    return x <= 0.0 ? 0.0 : -std::expm1(-rate * x);
  }
  double sf(double x) const { return x <= 0.0 ? 1.0 : std::exp(-rate * x); }
  Moments moments() const {
    return detail::moments_from(1.0 / rate, 1.0 / (rate * rate));
  }
  double quantile(double p) const { return -std::log1p(-p) / rate; }
};

struct Fisher {
  static constexpr Family kFamily = Family::kFisher;
  static constexpr bool kDiscrete = false;
  double df1;
  double df2;

  double support_min() const { return 0.0; }
  double support_max() const { return kInf; }
  double pdf(double x) const {
    if (x < 0.0) return 0.0;
    if (x == 0.0) return df1 < 2 ? kInf : (df1 == 2 ? 1.0 : 0.0);
    if (std::isinf(x)) return 0.0;
    const auto [u, v] = beta_args(x);
    return std::exp(specfun::detail::log_beta_prefix(0.5 * df1, 0.5 * df2,
                                                     u, v) -
                    std::log(x));
  }
  double cdf(double x) const {
    if (x <= 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    const auto [u, v] = beta_args(x);
    return specfun::reg_inc_beta(0.5 * df1, 0.5 * df2, u, v);
  }
  double sf(double x) const {
    if (x <= 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    const auto [u, v] = beta_args(x);
    return specfun::reg_inc_beta(0.5 * df2, 0.5 * df1, v, u);
  }
  // u = df1 x / (df1 x + df2) and v = 1 - u, via r = df2 / (df1 x) so
  // neither product can overflow.
  std::pair<double, double> beta_args(double x) const {
    const double r = (df2 / df1) / x;
    if (std::isinf(r)) return {0.0, 1.0};
    return {1.0 / (1.0 + r), r / (1.0 + r)};
  }
  Moments moments() const {
    Moments m;
    if (df2 <= 2) return m;
    const double mean = df2 / (df2 - 2);
    m.mean = mean;
    if (df2 > 4) {
      double v = 2 * df2 * df2 * (df1 + df2 - 2) /
                 (df1 * (df2 - 2) * (df2 - 2) * (df2 - 4));
      if (!std::isfinite(v)) {
        v = 2.0 * mean * mean * (1.0 + (df1 - 2.0) / df2) /
            (df1 * (1.0 - 4.0 / df2));
      }
      m.variance = v;
      m.sd = std::sqrt(v);
    }
    return m;
  }
  double quantile_guess(double p) const {
    const auto m = moments();
    if (m.sd) return std::max(1e-3, *m.mean + *m.sd *
                                        specfun::normal_quantile_guess(p));
    return 1.0;
  }
};

struct Logistic {
  static constexpr Family kFamily = Family::kLogistic;
  static constexpr bool kDiscrete = false;
  double location;
  double scale;

  double support_min() const { return -kInf; }
  double support_max() const { return kInf; }
  double pdf(double x) const {
    const double e = std::exp(-std::fabs((x - location) / scale));
    return e / (scale * (1.0 + e) * (1.0 + e));
  }
  double cdf(double x) const {
    return 1.0 / (1.0 + std::exp(-(x - location) / scale));
  }
  double sf(double x) const {
    return 1.0 / (1.0 + std::exp((x - location) / scale));
  }
  Moments moments() const {
    return detail::moments_from(
        location, scale * scale * std::numbers::pi * std::numbers::pi / 3.0);
  }
  double quantile(double p) const {
    return location + scale * (std::log(p) - std::log1p(-p));
  }
};

struct Normal {
  static constexpr Family kFamily = Family::kNormal;
  static constexpr bool kDiscrete = false;
  double mu;
  double variance;

  double sd() const { return std::sqrt(variance); }
  double support_min() const { return -kInf; }
  double support_max() const { return kInf; }
  double pdf(double x) const {
    return detail::normal_pdf((x - mu) / sd()) / sd();
  }
  double cdf(double x) const { return specfun::normal_cdf((x - mu) / sd()); }
  double sf(double x) const { return specfun::normal_cdf((mu - x) / sd()); }
  Moments moments() const { return {mu, sd(), variance}; }
  double quantile_guess(double p) const {
    return mu + sd() * specfun::normal_quantile_guess(p);
  }
};

struct LogNormal {
  static constexpr Family kFamily = Family::kLogNormal;
  static constexpr bool kDiscrete = false;
  double meanlog;
  double sdlog;

  double support_min() const { return 0.0; }
  double support_max() const { return kInf; }
  double pdf(double x) const {
    if (x <= 0.0 || std::isinf(x)) return 0.0;
    const double d = detail::normal_pdf((std::log(x) - meanlog) / sdlog);
    return d == 0.0 ? 0.0 : d / sdlog / x;
  }
  double cdf(double x) const {
    if (x <= 0.0) return 0.0;
    return specfun::normal_cdf((std::log(x) - meanlog) / sdlog);
  }
  double sf(double x) const {
    if (x <= 0.0) return 1.0;
    return specfun::normal_cdf((meanlog - std::log(x)) / sdlog);
  }
  Moments moments() const {
    const double s2 = sdlog * sdlog;
    return detail::moments_from(std::exp(meanlog + 0.5 * s2),
                                std::expm1(s2) * std::exp(2 * meanlog + s2));
  }
  double quantile_guess(double p) const {
    return std::exp(meanlog + sdlog * specfun::normal_quantile_guess(p));
  }
};

struct StudentT {
  static constexpr Family kFamily = Family::kStudentT;
  static constexpr bool kDiscrete = false;
  double df;

  double support_min() const { return -kInf; }
  double support_max() const { return kInf; }
  double pdf(double x) const {
    if (std::isinf(x)) return 0.0;
    return std::exp(-0.5 * (df + 1.0) * std::log1p(x * x / df) -
                    specfun::log_beta(0.5 * df, 0.5)) /
           std::sqrt(df);
  }
  // P(T <= -|x|).
  double lower_tail(double x) const {
    if (std::isinf(x)) return 0.0;
    const double t2 = x * x;
    const double denom = df + t2;
    return 0.5 * specfun::reg_inc_beta(0.5 * df, 0.5, df / denom, t2 / denom);
  }
  double cdf(double x) const {
    if (x == 0.0) return 0.5;
    const double tail = lower_tail(x);
    return x < 0.0 ? tail : 1.0 - tail;
  }
  double sf(double x) const { return cdf(-x); }
  Moments moments() const {
    Moments m;
    if (df > 1) m.mean = 0.0;
    if (df > 2) {
      m.variance = df / (df - 2);
      m.sd = std::sqrt(*m.variance);
    }
    return m;
  }
  double quantile_guess(double p) const {
    const double z = specfun::normal_quantile_guess(p);
    // Cornish–Fisher expansion in 1/df.
    const double g1 = (z * z * z + z) / 4.0;
    const double g2 = (5 * std::pow(z, 5) + 16 * z * z * z + 3 * z) / 96.0;
    return z + g1 / df + g2 / (df * df);
  }
};

struct Weibull {
  static constexpr Family kFamily = Family::kWeibull;
  static constexpr bool kDiscrete = false;
  double shape;
  double scale;

  double support_min() const { return 0.0; }
  double support_max() const { return kInf; }
  double pdf(double x) const {
    if (x < 0.0 || std::isinf(x)) return 0.0;
    if (x == 0.0) return shape < 1 ? kInf : (shape == 1 ? 1.0 / scale : 0.0);
    const double log_z = std::log(x) - std::log(scale);
    const double zk = std::exp(shape * log_z);
    if (std::isinf(zk)) return 0.0;
    return std::exp(std::log(shape) - std::log(scale) + (shape - 1.0) * log_z -
                    zk);
  }
  // (x / scale)^shape without overflow in the ratio.
  double power(double x) const {
    return std::exp(shape * (std::log(x) - std::log(scale)));
  }
  double cdf(double x) const {
    return x <= 0.0 ? 0.0 : -std::expm1(-power(x));
  }
  double sf(double x) const { return x <= 0.0 ? 1.0 : std::exp(-power(x)); }
  Moments moments() const {
    if (!std::isfinite(2.0 / shape)) return {};
    const double lg1 = specfun::log_gamma(1.0 + 1.0 / shape);
    const double lg2 = specfun::log_gamma(1.0 + 2.0 / shape);
    const double mean = scale * std::exp(lg1);
    return detail::moments_from(mean,
                                mean * mean * std::expm1(lg2 - 2.0 * lg1));
  }
  double quantile(double p) const {
    return scale * std::pow(-std::log1p(-p), 1.0 / shape);
  }
};

// --- Discrete families -----------------------------------------------------
//
// pmf(k) is evaluated at integers only; cdf/sf take an integer k and give
// P(X <= k) and P(X > k).

struct Binomial {
  static constexpr Family kFamily = Family::kBinomial;
  static constexpr bool kDiscrete = true;
  double n;
  double p;

  double support_min() const { return 0.0; }
  double support_max() const { return n; }
  double pmf(double k) const {
    if (k < 0 || k > n) return 0.0;
    return detail::binom_raw(k, n, p, 1.0 - p);
  }
  double cdf(double k) const {
    if (k < 0) return 0.0;
    if (k >= n) return 1.0;
    return specfun::reg_inc_beta(n - k, k + 1, 1.0 - p, p);
  }
  double sf(double k) const {
    if (k < 0) return 1.0;
    if (k >= n) return 0.0;
    return specfun::reg_inc_beta(k + 1, n - k, p, 1.0 - p);
  }
  Moments moments() const {
    return detail::moments_from(n * p, n * p * (1 - p));
  }
};

struct GeometricTrials {
  static constexpr Family kFamily = Family::kGeometricTrials;
  static constexpr bool kDiscrete = true;
  double p;

  double support_min() const { return 1.0; }
  double support_max() const { return kInf; }
  double pmf(double k) const {
    if (k < 1) return 0.0;
    if (p == 1.0) return k == 1 ? 1.0 : 0.0;
    return p * std::exp((k - 1) * std::log1p(-p));
  }
  double cdf(double k) const {
    if (k < 1) return 0.0;
    if (p == 1.0) return 1.0;
    return -std::expm1(k * std::log1p(-p));
  }
  double sf(double k) const {
    if (k < 1) return 1.0;
    if (p == 1.0) return 0.0;
    return std::exp(k * std::log1p(-p));
  }
  Moments moments() const {
    return detail::moments_from(1.0 / p, (1 - p) / (p * p));
  }
};

struct GeometricFailures {
  static constexpr Family kFamily = Family::kGeometricFailures;
  static constexpr bool kDiscrete = true;
  double p;

  double support_min() const { return 0.0; }
  double support_max() const { return kInf; }
  double pmf(double k) const { return GeometricTrials{p}.pmf(k + 1); }
  double cdf(double k) const { return GeometricTrials{p}.cdf(k + 1); }
  double sf(double k) const { return GeometricTrials{p}.sf(k + 1); }
  Moments moments() const {
    return detail::moments_from((1 - p) / p, (1 - p) / (p * p));
  }
};

struct Hypergeometric {
  static constexpr Family kFamily = Family::kHypergeometric;
  static constexpr bool kDiscrete = true;
  double population;  // N
  double successes;   // K
  double draws;       // n

  double support_min() const {
    return std::max(0.0, draws - (population - successes));
  }
  double support_max() const { return std::min(draws, successes); }
  double pmf(double k) const {
    if (k < support_min() || k > support_max()) return 0.0;
    const double p = draws / population;
    const double q = (population - draws) / population;
    const double d1 = detail::binom_raw(k, successes, p, q);
    const double d2 = detail::binom_raw(draws - k, population - successes, p, q);
    const double d3 = detail::binom_raw(draws, population, p, q);
    return d1 * d2 / d3;
  }
  double mode() const {
    return std::floor((draws + 1) * (successes + 1) / (population + 2));
  }
  // Sums the shorter side of the mode so both tails keep their accuracy.
  double cdf(double k) const {
    k = std::floor(k);
    if (k < support_min()) return 0.0;
    if (k >= support_max()) return 1.0;
    if (k <= mode()) return sum_down(k);
    return std::max(0.0, 1.0 - sum_up(k + 1));
  }
  double sf(double k) const {
    k = std::floor(k);
    if (k < support_min()) return 1.0;
    if (k >= support_max()) return 0.0;
    if (k >= mode()) return sum_up(k + 1);
    return std::max(0.0, 1.0 - sum_down(k));
  }
  Moments moments() const {
    const double mean = draws * successes / population;
    const double var =
        population > 1
            ? mean * (population - successes) / population *
                  (population - draws) / (population - 1)
            : 0.0;
    return detail::moments_from(mean, var);
  }

 private:
  // Terms shrink monotonically away from the mode, so the walk stops once
  // they no longer move the sum. Every 32nd term is recomputed directly to
  // keep the ratio recurrence from drifting.
  static constexpr int kAnchorEvery = 32;

  double sum_down(double k) const {
    specfun::CompensatedSum s;
    double term = pmf(k);
    for (int i = 0; k >= support_min(); ++i) {
      s.add(term);
      if (term <= 1e-17 * s.value()) break;
      // pmf(k - 1) / pmf(k)
      const double r = k * (population - successes - draws + k) /
                       ((successes - k + 1) * (draws - k + 1));
      k -= 1.0;
      term = (i + 1) % kAnchorEvery == 0 ? pmf(k) : term * r;
    }
    return std::min(1.0, s.value());
  }
  double sum_up(double k) const {
    specfun::CompensatedSum s;
    double term = pmf(k);
    for (int i = 0; k <= support_max(); ++i) {
      s.add(term);
      if (term <= 1e-17 * s.value()) break;
      // pmf(k + 1) / pmf(k)
      const double r = (successes - k) * (draws - k) /
                       ((k + 1) * (population - successes - draws + k + 1));
      k += 1.0;
      term = (i + 1) % kAnchorEvery == 0 ? pmf(k) : term * r;
    }
    return std::min(1.0, s.value());
  }
};

struct NegBinomialSizeProb {
  static constexpr Family kFamily = Family::kNegBinomialSizeProb;
  static constexpr bool kDiscrete = true;
  double size;
  double prob;

  double support_min() const { return 0.0; }
  double support_max() const { return kInf; }
  double pmf(double k) const {
    if (k < 0) return 0.0;
    if (prob == 1.0) return k == 0 ? 1.0 : 0.0;
    if (k == 0) return std::exp(size * std::log(prob));
    if (std::isinf(k + size)) {
      fail(ErrorCode::kDomain, "count plus size exceeds the double range");
    }
    return detail::binom_raw(size, k + size, prob, 1.0 - prob) * size /
           (size + k);
  }
  double cdf(double k) const {
    if (k < 0) return 0.0;
    if (prob == 1.0) return 1.0;
    return specfun::reg_inc_beta(size, k + 1, prob, 1.0 - prob);
  }
  double sf(double k) const {
    if (k < 0) return 1.0;
    if (prob == 1.0) return 0.0;
    return specfun::reg_inc_beta(k + 1, size, 1.0 - prob, prob);
  }
  Moments moments() const {
    return detail::moments_from(size * (1 - prob) / prob,
                                size * (1 - prob) / (prob * prob));
  }
};

struct NegBinomialMeanSize {
  static constexpr Family kFamily = Family::kNegBinomialMeanSize;
  static constexpr bool kDiscrete = true;
  double mean;
  double size;

  NegBinomialSizeProb as_size_prob() const {
    return {size, size / (size + mean)};
  }
  double support_min() const { return 0.0; }
  double support_max() const { return kInf; }
  double pmf(double k) const { return as_size_prob().pmf(k); }
  double cdf(double k) const { return as_size_prob().cdf(k); }
  double sf(double k) const { return as_size_prob().sf(k); }
  Moments moments() const {
    return detail::moments_from(mean, mean + mean * mean / size);
  }
};

struct Poisson {
  static constexpr Family kFamily = Family::kPoisson;
  static constexpr bool kDiscrete = true;
  double lambda;

  double support_min() const { return 0.0; }
  double support_max() const { return kInf; }
  double pmf(double k) const {
    return k < 0 ? 0.0 : detail::poisson_raw(k, lambda);
  }
  double cdf(double k) const {
    if (k < 0) return 0.0;
    return specfun::reg_inc_gamma_upper(k + 1, lambda);
  }
  double sf(double k) const {
    if (k < 0) return 1.0;
    return specfun::reg_inc_gamma_lower(k + 1, lambda);
  }
  Moments moments() const { return detail::moments_from(lambda, lambda); }
};

// --- Distribution ------------------------------------------------------

/// One of the eighteen distributions with validated parameters. Instances
/// are only created through the factories, which reject invalid parameters
/// with kInvalidParameter naming the offending field.
/// Tail sums walk the support term by term, so the population is capped.
inline constexpr double kMaxHypergeometricPopulation = 1e9;

class Distribution {
 public:
  using Variant =
      std::variant<Beta, Binomial, Cauchy, ChiSquare, Exponential, Fisher,
                   Gamma, GeometricTrials, GeometricFailures, Hypergeometric,
                   Logistic, LogNormal, NegBinomialSizeProb,
                   NegBinomialMeanSize, Normal, Poisson, StudentT, Weibull>;

  static Distribution beta(double alpha, double beta) {
    positive(alpha, "alpha");
    positive(beta, "beta");
    return Distribution(Beta{alpha, beta});
  }
  static Distribution binomial(double n, double p) {
    positive_integer(n, "n");
    probability(p, "p", true, true);
    return Distribution(Binomial{n, p});
  }
  static Distribution cauchy(double location, double scale) {
    finite(location, "location");
    positive(scale, "scale");
    return Distribution(Cauchy{location, scale});
  }
  static Distribution chi_square(double df) {
    positive(df, "df");
    return Distribution(ChiSquare{df});
  }
  static Distribution exponential(double rate) {
    positive(rate, "rate");
    return Distribution(Exponential{rate});
  }
  static Distribution fisher(double df1, double df2) {
    positive(df1, "df1");
    positive(df2, "df2");
    return Distribution(Fisher{df1, df2});
  }
  static Distribution gamma(double shape, double rate) {
    positive(shape, "shape");
    positive(rate, "rate");
    return Distribution(Gamma{shape, rate});
  }
  static Distribution geometric_trials(double p) {
    probability(p, "p", false, true);
    return Distribution(GeometricTrials{p});
  }
  static Distribution geometric_failures(double p) {
    probability(p, "p", false, true);
    return Distribution(GeometricFailures{p});
  }
  static Distribution hypergeometric(double population, double successes,
                                     double draws) {
    positive_integer(population, "population");
    if (population > kMaxHypergeometricPopulation) {
      fail(ErrorCode::kInvalidParameter,
           "population above 1e9 is not supported", "params.population");
    }
    nonneg_integer(successes, "successes");
    nonneg_integer(draws, "draws");
    if (successes > population) {
      fail(ErrorCode::kInvalidParameter,
           "successes must not exceed population", "params.successes");
    }
    if (draws > population) {
      fail(ErrorCode::kInvalidParameter, "draws must not exceed population",
           "params.draws");
    }
    return Distribution(Hypergeometric{population, successes, draws});
  }
  static Distribution logistic(double location, double scale) {
    finite(location, "location");
    positive(scale, "scale");
    return Distribution(Logistic{location, scale});
  }
  static Distribution log_normal(double meanlog, double sdlog) {
    finite(meanlog, "meanlog");
    positive(sdlog, "sdlog");
    return Distribution(LogNormal{meanlog, sdlog});
  }
  static Distribution negative_binomial_size_prob(double size, double prob) {
    positive(size, "size");
    probability(prob, "prob", false, true);
    return Distribution(NegBinomialSizeProb{size, prob});
  }
  static Distribution negative_binomial_mean_size(double mean, double size) {
    positive(mean, "mean");
    positive(size, "size");
    return Distribution(NegBinomialMeanSize{mean, size});
  }
  static Distribution normal(double mu, double variance) {
    finite(mu, "mu");
    positive(variance, "var");
    return Distribution(Normal{mu, variance});
  }
  static Distribution poisson(double lambda) {
    positive(lambda, "lambda");
    return Distribution(Poisson{lambda});
  }
  static Distribution student_t(double df) {
    positive(df, "df");
    return Distribution(StudentT{df});
  }
  static Distribution weibull(double shape, double scale) {
    positive(shape, "shape");
    positive(scale, "scale");
    return Distribution(Weibull{shape, scale});
  }

  Family family() const {
    return std::visit([](const auto& d) { return d.kFamily; }, v_);
  }
  bool is_discrete() const {
    return std::visit([](const auto& d) { return d.kDiscrete; }, v_);
  }
  const Variant& variant() const { return v_; }

  /// Parameters under their canonical names, in catalog order.
  std::vector<std::pair<std::string, double>> params() const;

 private:
  explicit Distribution(Variant v) : v_(std::move(v)) {}

  static void finite(double v, const char* name) {
    if (!std::isfinite(v)) {
      fail(ErrorCode::kInvalidParameter, std::string(name) + " must be finite",
           std::string("params.") + name);
    }
  }
  static void positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      fail(ErrorCode::kInvalidParameter,
           std::string(name) + " must be a positive finite number",
           std::string("params.") + name);
    }
  }
  static void positive_integer(double v, const char* name) {
    if (!detail::is_integer(v) || v < 1.0) {
      fail(ErrorCode::kInvalidParameter,
           std::string(name) + " must be a positive integer",
           std::string("params.") + name);
    }
  }
  static void nonneg_integer(double v, const char* name) {
    if (!detail::is_integer(v) || v < 0.0) {
      fail(ErrorCode::kInvalidParameter,
           std::string(name) + " must be a non-negative integer",
           std::string("params.") + name);
    }
  }
  static void probability(double v, const char* name, bool allow_zero,
                          bool allow_one) {
    const bool ok = (allow_zero ? v >= 0.0 : v > 0.0) &&
                    (allow_one ? v <= 1.0 : v < 1.0);
    if (!ok) {
      const std::string range = std::string(allow_zero ? "[0, " : "(0, ") +
                                (allow_one ? "1]" : "1)");
      fail(ErrorCode::kInvalidParameter,
           std::string(name) + " must lie in " + range,
           std::string("params.") + name);
    }
  }

  Variant v_;
};

inline std::vector<std::pair<std::string, double>> Distribution::params()
    const {
  using P = std::vector<std::pair<std::string, double>>;
  struct Visitor {
    P operator()(const Beta& d) const { return {{"alpha", d.alpha}, {"beta", d.beta}}; }
    P operator()(const Binomial& d) const { return {{"n", d.n}, {"p", d.p}}; }
    P operator()(const Cauchy& d) const { return {{"location", d.location}, {"scale", d.scale}}; }
    P operator()(const ChiSquare& d) const { return {{"df", d.df}}; }
    P operator()(const Exponential& d) const { return {{"rate", d.rate}}; }
    P operator()(const Fisher& d) const { return {{"df1", d.df1}, {"df2", d.df2}}; }
    P operator()(const Gamma& d) const { return {{"shape", d.shape}, {"rate", d.rate}}; }
    P operator()(const GeometricTrials& d) const { return {{"p", d.p}}; }
    P operator()(const GeometricFailures& d) const { return {{"p", d.p}}; }
    P operator()(const Hypergeometric& d) const {
      return {{"population", d.population}, {"successes", d.successes}, {"draws", d.draws}};
    }
    P operator()(const Logistic& d) const { return {{"location", d.location}, {"scale", d.scale}}; }
    P operator()(const LogNormal& d) const { return {{"meanlog", d.meanlog}, {"sdlog", d.sdlog}}; }
    P operator()(const NegBinomialSizeProb& d) const { return {{"size", d.size}, {"prob", d.prob}}; }
    P operator()(const NegBinomialMeanSize& d) const { return {{"mean", d.mean}, {"size", d.size}}; }
    P operator()(const Normal& d) const { return {{"mu", d.mu}, {"var", d.variance}}; }
    P operator()(const Poisson& d) const { return {{"lambda", d.lambda}}; }
    P operator()(const StudentT& d) const { return {{"df", d.df}}; }
    P operator()(const Weibull& d) const { return {{"shape", d.shape}, {"scale", d.scale}}; }
  };
  return std::visit(Visitor{}, v_);
}

// --- Catalog ---------------------------------------------------------------

struct ParamInfo {
  std::string_view name;
  bool integer;
  std::string_view constraint;
};

struct FamilyInfo {
  Family family;
  std::string_view display_name;
  std::vector<ParamInfo> params;
  std::string_view support;
  bool discrete;
};

inline FamilyInfo family_info(Family f) {
  switch (f) {
    case Family::kBeta:
      return {f, "Beta", {{"alpha", false, "> 0"}, {"beta", false, "> 0"}}, "[0, 1]", false};
    case Family::kBinomial:
      return {f, "Binomial", {{"n", true, "integer >= 1"}, {"p", false, "in [0, 1]"}}, "{0, 1, ..., n}", true};
    case Family::kCauchy:
      return {f, "Cauchy", {{"location", false, "real"}, {"scale", false, "> 0"}}, "(-inf, inf)", false};
    case Family::kChiSquare:
      return {f, "Chi-square", {{"df", false, "> 0"}}, "[0, inf)", false};
    case Family::kExponential:
      return {f, "Exponential", {{"rate", false, "> 0"}}, "[0, inf)", false};
    case Family::kFisher:
      return {f, "Fisher", {{"df1", false, "> 0"}, {"df2", false, "> 0"}}, "[0, inf)", false};
    case Family::kGamma:
      return {f, "Gamma", {{"shape", false, "> 0"}, {"rate", false, "> 0"}}, "[0, inf)", false};
    case Family::kGeometricTrials:
      return {f, "Geometric (trial of first success)", {{"p", false, "in (0, 1]"}}, "{1, 2, ...}", true};
    case Family::kGeometricFailures:
      return {f, "Geometric (failures before first success)", {{"p", false, "in (0, 1]"}}, "{0, 1, ...}", true};
    case Family::kHypergeometric:
      return {f, "Hypergeometric",
              {{"population", true, "integer >= 1"},
               {"successes", true, "integer in [0, population]"},
               {"draws", true, "integer in [0, population]"}},
              "{max(0, draws - population + successes), ..., min(draws, successes)}", true};
    case Family::kLogistic:
      return {f, "Logistic", {{"location", false, "real"}, {"scale", false, "> 0"}}, "(-inf, inf)", false};
    case Family::kLogNormal:
      return {f, "Log-Normal", {{"meanlog", false, "real"}, {"sdlog", false, "> 0"}}, "(0, inf)", false};
    case Family::kNegBinomialSizeProb:
      return {f, "Negative Binomial (size, probability)",
              {{"size", false, "> 0"}, {"prob", false, "in (0, 1]"}}, "{0, 1, ...}", true};
    case Family::kNegBinomialMeanSize:
      return {f, "Negative Binomial (mean, size)",
              {{"mean", false, "> 0"}, {"size", false, "> 0"}}, "{0, 1, ...}", true};
    case Family::kNormal:
      return {f, "Normal", {{"mu", false, "real"}, {"var", false, "> 0 (or sd > 0)"}}, "(-inf, inf)", false};
    case Family::kPoisson:
      return {f, "Poisson", {{"lambda", false, "> 0"}}, "{0, 1, ...}", true};
    case Family::kStudentT:
      return {f, "Student's t", {{"df", false, "> 0"}}, "(-inf, inf)", false};
    case Family::kWeibull:
      return {f, "Weibull", {{"shape", false, "> 0"}, {"scale", false, "> 0"}}, "[0, inf)", false};
  }
  return {};
}

/// Builds a model from canonical parameter names. Unknown or missing names
/// are reported as kInvalidParameter. Normal accepts exactly one of var/sd.
inline Distribution make_model(Family f,
                               const std::map<std::string, double>& params) {
  std::vector<std::string> allowed;
  for (const auto& p : family_info(f).params) allowed.emplace_back(p.name);
  if (f == Family::kNormal) allowed.emplace_back("sd");
  for (const auto& [name, value] : params) {
    if (std::find(allowed.begin(), allowed.end(), name) == allowed.end()) {
      fail(ErrorCode::kInvalidParameter,
           "unknown parameter '" + name + "' for " + std::string(tag(f)),
           "params." + name);
    }
  }
  auto get = [&](const char* name) {
    const auto it = params.find(name);
    if (it == params.end()) {
      fail(ErrorCode::kInvalidParameter,
           std::string("missing parameter '") + name + "'",
           std::string("params.") + name);
    }
    return it->second;
  };
  switch (f) {
    case Family::kBeta: return Distribution::beta(get("alpha"), get("beta"));
    case Family::kBinomial: return Distribution::binomial(get("n"), get("p"));
    case Family::kCauchy: return Distribution::cauchy(get("location"), get("scale"));
    case Family::kChiSquare: return Distribution::chi_square(get("df"));
    case Family::kExponential: return Distribution::exponential(get("rate"));
    case Family::kFisher: return Distribution::fisher(get("df1"), get("df2"));
    case Family::kGamma: return Distribution::gamma(get("shape"), get("rate"));
    case Family::kGeometricTrials: return Distribution::geometric_trials(get("p"));
    case Family::kGeometricFailures: return Distribution::geometric_failures(get("p"));
    case Family::kHypergeometric:
      return Distribution::hypergeometric(get("population"), get("successes"), get("draws"));
    case Family::kLogistic: return Distribution::logistic(get("location"), get("scale"));
    case Family::kLogNormal: return Distribution::log_normal(get("meanlog"), get("sdlog"));
    case Family::kNegBinomialSizeProb:
      return Distribution::negative_binomial_size_prob(get("size"), get("prob"));
    case Family::kNegBinomialMeanSize:
      return Distribution::negative_binomial_mean_size(get("mean"), get("size"));
    case Family::kNormal: {
      const bool has_var = params.count("var") != 0;
      const bool has_sd = params.count("sd") != 0;
      if (has_var == has_sd) {
        fail(ErrorCode::kInvalidParameter,
             "normal requires exactly one of 'var' or 'sd'", "params.var");
      }
      if (has_sd) {
        const double sd = params.at("sd");
        if (!(sd > 0.0) || !std::isfinite(sd)) {
          fail(ErrorCode::kInvalidParameter,
               "sd must be a positive finite number", "params.sd");
        }
        return Distribution::normal(get("mu"), sd * sd);
      }
      return Distribution::normal(get("mu"), get("var"));
    }
    case Family::kPoisson: return Distribution::poisson(get("lambda"));
    case Family::kStudentT: return Distribution::student_t(get("df"));
    case Family::kWeibull: return Distribution::weibull(get("shape"), get("scale"));
  }
  fail(ErrorCode::kInternal, "unhandled family");
}

// --- Operations ------------------------------------------------------------

namespace detail {

template <class D>
double continuous_quantile(const D& d, double p) {
  if constexpr (requires { d.quantile(p); }) {
    return d.quantile(p);
  } else {
    double guess = d.quantile_guess(p);
    const double lo = d.support_min();
    const double hi = d.support_max();
    if (!std::isfinite(guess) || guess <= lo || guess >= hi) {
      guess = std::isfinite(lo) ? (std::isfinite(hi) ? 0.5 * (lo + hi)
                                                     : lo + 1.0)
                                : (std::isfinite(hi) ? hi - 1.0 : 0.0);
    }
    return specfun::invert_cdf_monotone(
        [&](double x) { return d.cdf(x); }, p,
        specfun::Bracket{guess, guess, lo, hi, guess},
        [&](double x) { return d.pdf(x); });
  }
}

// Smallest support point k with cdf(k) >= p.
template <class D>
double discrete_quantile(const D& d, double p) {
  const double kmin = d.support_min();
  const double kmax = d.support_max();
  const auto m = d.moments();
  double guess = kmin;
  if (m.mean && m.sd) {
    guess = std::round(*m.mean + *m.sd * specfun::normal_quantile_guess(p));
  }
  guess = std::clamp(guess, kmin, kmax);
  if (!std::isfinite(guess)) guess = kmin;

  double lo;  // cdf(lo) < p, or lo == kmin - 1
  double hi;  // cdf(hi) >= p
  if (d.cdf(guess) >= p) {
    hi = guess;
    double step = 1.0;
    lo = guess - step;
    while (lo >= kmin && d.cdf(lo) >= p) {
      hi = lo;
      step *= 2.0;
      lo = hi - step;
    }
    lo = std::max(lo, kmin - 1.0);
  } else {
    lo = guess;
    double step = 1.0;
    hi = std::min(kmax, guess + step);
    while (d.cdf(hi) < p) {
      if (hi >= kmax) return kmax;
      lo = hi;
      step *= 2.0;
      hi = std::min(kmax, lo + step);
    }
  }
  while (hi - lo > 1.0) {
    const double mid = std::floor(lo + 0.5 * (hi - lo));
    if (mid <= lo || mid >= hi) break;  // beyond 2^53 neighbours differ by > 1
    if (d.cdf(mid) >= p) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace detail

/// Density (continuous) or mass (discrete; zero off the integer support).
/// Throws kSingularity at density poles such as Beta(α < 1) at 0.
inline double pdf_or_pmf(const Distribution& model, double x) {
  if (!std::isfinite(x)) {
    fail(ErrorCode::kDomain, "x must be finite", "x");
  }
  return std::visit(
      [&](const auto& d) -> double {
        if constexpr (std::decay_t<decltype(d)>::kDiscrete) {
          if (x != std::floor(x)) return 0.0;
          return d.pmf(x);
        } else {
          const double v = d.pdf(x);
          if (std::isinf(v)) {
            fail(ErrorCode::kSingularity,
                 "density is unbounded at x = " + format_compact(x), "x");
          }
          return v;
        }
      },
      model.variant());
}

/// P(X <= x). Discrete CDFs floor non-integer x.
inline double cdf(const Distribution& model, double x) {
  if (std::isnan(x)) fail(ErrorCode::kDomain, "x must not be NaN", "x");
  if (x == -kInf) return 0.0;
  if (x == kInf) return 1.0;
  return std::visit(
      [&](const auto& d) -> double {
        if constexpr (std::decay_t<decltype(d)>::kDiscrete) {
          return d.cdf(std::floor(x));
        } else {
          return d.cdf(x);
        }
      },
      model.variant());
}

/// P(X > x).
inline double sf(const Distribution& model, double x) {
  if (std::isnan(x)) fail(ErrorCode::kDomain, "x must not be NaN", "x");
  if (x == -kInf) return 1.0;
  if (x == kInf) return 0.0;
  return std::visit(
      [&](const auto& d) -> double {
        if constexpr (std::decay_t<decltype(d)>::kDiscrete) {
          return d.sf(std::floor(x));
        } else {
          return d.sf(x);
        }
      },
      model.variant());
}

/// Continuous: x with cdf(x) = p. Discrete: smallest support point with
/// cdf >= p.
inline double quantile(const Distribution& model, double p) {
  if (!(p > 0.0 && p < 1.0)) {
    fail(ErrorCode::kDomain, "p must lie in (0, 1)", "p");
  }
  return std::visit(
      [&](const auto& d) -> double {
        if constexpr (std::decay_t<decltype(d)>::kDiscrete) {
          return detail::discrete_quantile(d, p);
        } else {
          return detail::continuous_quantile(d, p);
        }
      },
      model.variant());
}

inline Moments moments(const Distribution& model) {
  return std::visit([](const auto& d) { return d.moments(); }, model.variant());
}

inline double support_min(const Distribution& model) {
  return std::visit([](const auto& d) { return d.support_min(); },
                    model.variant());
}

inline double support_max(const Distribution& model) {
  return std::visit([](const auto& d) { return d.support_max(); },
                    model.variant());
}

// --- Queries ---------------------------------------------------------------

enum class QueryKind { kLowerTail, kUpperTail, kInterval };

inline constexpr std::string_view query_kind_tag(QueryKind k) {
  switch (k) {
    case QueryKind::kLowerTail: return "lower_tail";
    case QueryKind::kUpperTail: return "upper_tail";
    case QueryKind::kInterval: return "interval";
  }
  return "";
}

/// LowerTail(x): P(X <= x); UpperTail(x): P(X > x); Interval(a, b):
/// P(a <= X <= b). Tail queries keep their bound in `a`.
struct ProbabilityQuery {
  QueryKind kind = QueryKind::kLowerTail;
  double a = 0.0;
  double b = 0.0;

  static ProbabilityQuery lower_tail(double x) {
    check(x, "query.x");
    return {QueryKind::kLowerTail, x, x};
  }
  static ProbabilityQuery upper_tail(double x) {
    check(x, "query.x");
    return {QueryKind::kUpperTail, x, x};
  }
  static ProbabilityQuery interval(double a, double b) {
    check(a, "query.a");
    check(b, "query.b");
    if (a > b) {
      fail(ErrorCode::kIntervalOrder, "interval requires a <= b", "query.b");
    }
    return {QueryKind::kInterval, a, b};
  }

 private:
  static void check(double v, const char* field) {
    if (std::isnan(v)) fail(ErrorCode::kDomain, "bound must not be NaN", field);
  }
};

/// Probability of the query event, at full precision.
inline double probability_value(const Distribution& model,
                                const ProbabilityQuery& q) {
  switch (q.kind) {
    case QueryKind::kLowerTail: return cdf(model, q.a);
    case QueryKind::kUpperTail: return sf(model, q.a);
    case QueryKind::kInterval: {
      if (q.a > q.b) {
        fail(ErrorCode::kIntervalOrder, "interval requires a <= b", "query.b");
      }
      // The atom at a belongs to the event for discrete laws.
      const double left = model.is_discrete() ? std::ceil(q.a) - 1.0 : q.a;
      const double right = model.is_discrete() ? std::floor(q.b) : q.b;
      if (right < left) return 0.0;
      const double lower_left = cdf(model, left);
      double v;
      if (lower_left > 0.5) {
        v = sf(model, left) - sf(model, right);
      } else {
        v = cdf(model, right) - lower_left;
      }
      return std::clamp(v, 0.0, 1.0);
    }
  }
  return 0.0;
}

// --- Plot data -------------------------------------------------------------

struct ShadedRange {
  double lo;
  double hi;
};

struct PlotData {
  std::vector<double> grid;
  std::vector<double> density;
  std::vector<ShadedRange> shaded;
  bool is_discrete = false;
  std::optional<double> marker;
};

inline constexpr int kContinuousGridPoints = 512;
inline constexpr int kMaxDiscretePoints = 2001;
inline constexpr double kPlotLowerQuantile = 0.0005;
inline constexpr double kPlotUpperQuantile = 0.9995;

namespace detail {

inline void clip_shaded(PlotData& plot, double lo, double hi) {
  if (plot.grid.empty()) return;
  lo = std::max(lo, plot.grid.front());
  hi = std::min(hi, plot.grid.back());
  if (lo <= hi) plot.shaded.push_back({lo, hi});
}

}  // namespace detail

/// Evaluates the density over [start, end]. Continuous grids have `points`
/// equally spaced abscissae. Discrete grids list every integer in range, or
/// every k-th integer when the range holds more than kMaxDiscretePoints.
inline PlotData density_grid(const Distribution& model, double start,
                             double end, int points = kContinuousGridPoints) {
  PlotData plot;
  plot.is_discrete = model.is_discrete();
  if (plot.is_discrete) {
    const double first = std::ceil(start);
    const double count = std::floor(end) - first + 1;
    if (!(count >= 1)) return plot;
    const double stride =
        std::max(1.0, std::ceil(count / kMaxDiscretePoints));
    for (int i = 0; i < kMaxDiscretePoints; ++i) {
      const double k = first + stride * i;
      if (k > end) break;
      if (!plot.grid.empty() && k <= plot.grid.back()) break;
      plot.grid.push_back(k);
      plot.density.push_back(pdf_or_pmf(model, k));
    }
    return plot;
  }
  plot.grid.reserve(points);
  for (int i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / (points - 1);
    double x = i + 1 == points ? end : std::lerp(start, end, t);
    if (!plot.grid.empty() && x <= plot.grid.back()) continue;
    plot.grid.push_back(x);
    plot.density.push_back(pdf_or_pmf(model, x));
  }
  return plot;
}

/// Density or mass over the central 99.9% of the distribution, widened to
/// include query bounds that fall inside the support, with the query event
/// shaded.
inline PlotData plot_data(const Distribution& model,
                          const ProbabilityQuery& q) {
  double start = quantile(model, kPlotLowerQuantile);
  double end = quantile(model, kPlotUpperQuantile);
  const double smin = support_min(model);
  const double smax = support_max(model);
  auto include = [&](double x) {
    if (!std::isfinite(x)) return;
    if (model.is_discrete()) {
      x = std::clamp(std::floor(x), smin, smax);
      if (!std::isfinite(x)) return;
    } else if (!(x > smin && x < smax)) {
      return;
    }
    start = std::min(start, x);
    end = std::max(end, x);
  };
  include(q.a);
  if (q.kind == QueryKind::kInterval) {
    include(model.is_discrete() ? std::ceil(q.a) : q.a);
    include(q.b);
  }
  if (!model.is_discrete() && start == end) {
    end = start + 1.0;
  }
  PlotData plot = density_grid(model, start, end);
  if (plot.grid.empty()) return plot;
  const double first = plot.grid.front();
  const double last = plot.grid.back();
  switch (q.kind) {
    case QueryKind::kLowerTail:
      detail::clip_shaded(plot, first,
                          model.is_discrete() ? std::floor(q.a) : q.a);
      break;
    case QueryKind::kUpperTail:
      detail::clip_shaded(plot,
                          model.is_discrete() ? std::floor(q.a) + 1.0 : q.a,
                          last);
      break;
    case QueryKind::kInterval:
      detail::clip_shaded(plot, model.is_discrete() ? std::ceil(q.a) : q.a,
                          model.is_discrete() ? std::floor(q.b) : q.b);
      break;
  }
  return plot;
}

}  // namespace statlab::dist
