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

// Confidence intervals and hypothesis tests for the seven inference
// settings: one mean, two independent means, paired means, one proportion,
// two proportions, one variance and two variances.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "statlab/derivation.hpp"
#include "statlab/distributions.hpp"
#include "statlab/error.hpp"
#include "statlab/specfun.hpp"

namespace statlab::inference {

enum class Setting {
  kOneMean,
  kTwoMeansIndependent,
  kTwoMeansPaired,
  kOneProportion,
  kTwoProportions,
  kOneVariance,
  kTwoVariances,
};

inline constexpr Setting kAllSettings[] = {
    Setting::kOneMean,        Setting::kTwoMeansIndependent,
    Setting::kTwoMeansPaired, Setting::kOneProportion,
    Setting::kTwoProportions, Setting::kOneVariance,
    Setting::kTwoVariances,
};

inline constexpr std::string_view setting_tag(Setting s) {
  switch (s) {
    case Setting::kOneMean: return "one_mean";
    case Setting::kTwoMeansIndependent: return "two_means_independent";
    case Setting::kTwoMeansPaired: return "two_means_paired";
    case Setting::kOneProportion: return "one_proportion";
    case Setting::kTwoProportions: return "two_proportions";
    case Setting::kOneVariance: return "one_variance";
    case Setting::kTwoVariances: return "two_variances";
  }
  return "";
}

inline std::optional<Setting> setting_from_tag(std::string_view name) {
  for (Setting s : kAllSettings) {
    if (setting_tag(s) == name) return s;
  }
  return std::nullopt;
}

inline constexpr int sample_count(Setting s) {
  switch (s) {
    case Setting::kOneMean:
    case Setting::kOneProportion:
    case Setting::kOneVariance: return 1;
    default: return 2;
  }
}

enum class Alternative { kTwoSided, kGreater, kLess };

inline constexpr std::string_view alternative_tag(Alternative a) {
  switch (a) {
    case Alternative::kTwoSided: return "two_sided";
    case Alternative::kGreater: return "greater";
    case Alternative::kLess: return "less";
  }
  return "";
}

inline std::optional<Alternative> alternative_from_tag(std::string_view s) {
  if (s == "two_sided" || s == "two") return Alternative::kTwoSided;
  if (s == "greater") return Alternative::kGreater;
  if (s == "less") return Alternative::kLess;
  return std::nullopt;
}

enum class SummaryKind { kMean, kProportion, kVariance };

inline constexpr SummaryKind summary_kind(Setting s) {
  switch (s) {
    case Setting::kOneProportion:
    case Setting::kTwoProportions: return SummaryKind::kProportion;
    case Setting::kOneVariance:
    case Setting::kTwoVariances: return SummaryKind::kVariance;
    default: return SummaryKind::kMean;
  }
}

// --- Inputs ----------------------------------------------------------------

struct RawSample {
  std::vector<double> observations;
};

/// n, x̄ and exactly one of s² or s.
struct MeanSummary {
  double n = 0;
  double mean = 0;
  std::optional<double> variance;
  std::optional<double> sd;
};

struct ProportionSummary {
  double n = 0;
  double successes = 0;
};

struct VarianceSummary {
  double n = 0;
  double variance = 0;
};

using SampleInput =
    std::variant<RawSample, MeanSummary, ProportionSummary, VarianceSummary>;

struct TestConfig {
  double alpha = 0.05;
  /// μ₀, Δ₀, p₀, σ₀² or the variance ratio under H₀; defaults per setting
  /// when absent (see default_h0).
  std::optional<double> h0;
  Alternative alternative = Alternative::kTwoSided;
  /// Known population standard deviation(s) select the z variants.
  std::optional<double> sigma;
  std::optional<double> sigma2;
  bool equal_variances = false;
  bool pooled_se = false;
};

struct InferenceRequest {
  Setting setting = Setting::kOneMean;
  std::vector<SampleInput> samples;
  TestConfig config;
};

inline constexpr double default_h0(Setting s) {
  switch (s) {
    case Setting::kOneProportion: return 0.5;
    case Setting::kOneVariance:
    case Setting::kTwoVariances: return 1.0;
    default: return 0.0;
  }
}

// --- Results ---------------------------------------------------------------

struct SampleSummary {
  double n = 0;
  std::optional<double> mean;
  std::optional<double> sd;
  std::optional<double> variance;
  std::optional<double> successes;
  std::optional<double> p_hat;

  bool operator==(const SampleSummary&) const = default;
};

enum class StatisticFamily { kNormal, kStudentT, kChiSquare, kFisher };

inline constexpr std::string_view statistic_family_tag(StatisticFamily f) {
  switch (f) {
    case StatisticFamily::kNormal: return "normal";
    case StatisticFamily::kStudentT: return "student_t";
    case StatisticFamily::kChiSquare: return "chi_square";
    case StatisticFamily::kFisher: return "fisher";
  }
  return "";
}

/// Reference distribution of the test statistic under H₀.
struct NullDistribution {
  StatisticFamily family = StatisticFamily::kNormal;
  double df1 = 0;
  double df2 = 0;

  dist::Distribution model() const {
    switch (family) {
      case StatisticFamily::kNormal: return dist::Distribution::normal(0, 1);
      case StatisticFamily::kStudentT: return dist::Distribution::student_t(df1);
      case StatisticFamily::kChiSquare: return dist::Distribution::chi_square(df1);
      case StatisticFamily::kFisher: return dist::Distribution::fisher(df1, df2);
    }
    return dist::Distribution::normal(0, 1);
  }
  bool symmetric() const {
    return family == StatisticFamily::kNormal ||
           family == StatisticFamily::kStudentT;
  }
  bool operator==(const NullDistribution&) const = default;
};

/// Interval for the parameter. One-sided intervals are open (±∞) on one
/// side, except that variance and ratio intervals stop at 0.
struct ConfidenceInterval {
  double lower = 0;
  double upper = 0;
  Alternative sidedness = Alternative::kTwoSided;
  double level = 0.95;

  bool operator==(const ConfidenceInterval&) const = default;
};

enum class Decision { kReject, kFailToReject };

inline constexpr std::string_view decision_tag(Decision d) {
  return d == Decision::kReject ? "reject" : "fail_to_reject";
}

struct InferenceResult {
  Setting setting = Setting::kOneMean;
  TestConfig config;
  double h0 = 0;
  std::vector<SampleSummary> summaries;
  /// Observations echoed for the Data section when raw data were given.
  std::vector<std::vector<double>> observations;
  /// Paired setting: the differences Dᵢ = X₁ᵢ − X₂ᵢ and their summary.
  std::vector<double> differences;
  std::optional<SampleSummary> difference_summary;

  double estimate = 0;
  /// Standard error used by the z/t statistic (unset for χ² and F).
  std::optional<double> standard_error;
  /// Two-proportion CI uses the unpooled SE even when the statistic pools.
  std::optional<double> ci_standard_error;
  std::optional<double> pooled_variance;
  std::optional<double> pooled_proportion;
  bool known_sigma = false;

  ConfidenceInterval ci;
  /// Multiplier (z or t quantile) or the χ²/F quantiles used by the CI.
  std::vector<double> ci_quantiles;
  double statistic = 0;
  NullDistribution null_distribution;
  std::vector<double> critical_values;
  double p_value = 1;
  Decision decision = Decision::kFailToReject;
  /// Normal approximation is shaky: n·p̂ < 5 or n·(1 − p̂) < 5.
  bool approximation_warning = false;

  DerivationDocument narrative;
  dist::PlotData plot;
};

// --- Operations ------------------------------------------------------------

namespace detail {

inline std::string sample_field(std::size_t index, const char* name) {
  return "samples[" + std::to_string(index) + "]." + name;
}

inline void require_count(double n, double min, std::size_t index) {
  if (!dist::detail::is_integer(n) || n < min) {
    fail(ErrorCode::kTooFewObservations,
         "n must be an integer >= " + format_compact(min),
         sample_field(index, "n"));
  }
}

inline double mean_of(const std::vector<double>& xs) {
  specfun::CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value() / static_cast<double>(xs.size());
}

inline double variance_of(const std::vector<double>& xs, double mean) {
  specfun::CompensatedSum s;
  for (double x : xs) s.add((x - mean) * (x - mean));
  return s.value() / static_cast<double>(xs.size() - 1);
}

inline void require_finite_data(const std::vector<double>& xs,
                                std::size_t index) {
  for (double x : xs) {
    if (!std::isfinite(x)) {
      fail(ErrorCode::kNonFiniteValue, "observations must be finite",
           sample_field(index, "data"));
    }
  }
}

}  // namespace detail

/// Reduces a sample to the statistics the setting needs. Raw data use the
/// n − 1 denominator; summaries pass through with s and s² derived from
/// each other.
inline SampleSummary summarize(const SampleInput& sample, SummaryKind kind,
                               std::size_t index = 0) {
  SampleSummary out;
  if (const auto* raw = std::get_if<RawSample>(&sample)) {
    const auto& xs = raw->observations;
    detail::require_finite_data(xs, index);
    out.n = static_cast<double>(xs.size());
    if (kind == SummaryKind::kProportion) {
      if (xs.empty()) {
        fail(ErrorCode::kTooFewObservations, "need at least one observation",
             detail::sample_field(index, "data"));
      }
      double successes = 0;
      for (double x : xs) {
        if (x != 0.0 && x != 1.0) {
          fail(ErrorCode::kNonBinaryData,
               "proportion data must be coded 0/1",
               detail::sample_field(index, "data"));
        }
        successes += x;
      }
      out.successes = successes;
      out.p_hat = successes / out.n;
      return out;
    }
    if (xs.size() < 2) {
      fail(ErrorCode::kTooFewObservations, "need at least two observations",
           detail::sample_field(index, "data"));
    }
    const double mean = detail::mean_of(xs);
    const double var = detail::variance_of(xs, mean);
    if (kind == SummaryKind::kVariance && !(var > 0.0)) {
      fail(ErrorCode::kDegenerateVariance,
           "sample variance is zero; a variance test needs s² > 0",
           detail::sample_field(index, "data"));
    }
    out.mean = mean;
    out.variance = var;
    out.sd = std::sqrt(var);
    return out;
  }
  if (const auto* ms = std::get_if<MeanSummary>(&sample)) {
    if (kind == SummaryKind::kProportion) {
      fail(ErrorCode::kIncompatibleSample,
           "proportion settings need successes and n",
           detail::sample_field(index, "kind"));
    }
    detail::require_count(ms->n, 2, index);
    if (!std::isfinite(ms->mean)) {
      fail(ErrorCode::kNonFiniteValue, "mean must be finite",
           detail::sample_field(index, "mean"));
    }
    if (ms->variance.has_value() == ms->sd.has_value()) {
      fail(ErrorCode::kSchemaViolation,
           "supply exactly one of variance or sd",
           detail::sample_field(index, "var"));
    }
    const double var = ms->variance ? *ms->variance : *ms->sd * *ms->sd;
    if (!(var >= 0.0) || !std::isfinite(var)) {
      fail(ErrorCode::kInvalidParameter, "variance must be >= 0",
           detail::sample_field(index, ms->variance ? "var" : "sd"));
    }
    if (kind == SummaryKind::kVariance && var == 0.0) {
      fail(ErrorCode::kDegenerateVariance,
           "a variance test needs s² > 0",
           detail::sample_field(index, "var"));
    }
    out.n = ms->n;
    out.mean = ms->mean;
    out.variance = var;
    out.sd = ms->sd ? *ms->sd : std::sqrt(var);
    return out;
  }
  if (const auto* ps = std::get_if<ProportionSummary>(&sample)) {
    if (kind != SummaryKind::kProportion) {
      fail(ErrorCode::kIncompatibleSample,
           "proportion summary given to a mean or variance setting",
           detail::sample_field(index, "kind"));
    }
    detail::require_count(ps->n, 1, index);
    if (!dist::detail::is_integer(ps->successes) || ps->successes < 0 ||
        ps->successes > ps->n) {
      fail(ErrorCode::kInvalidParameter,
           "successes must be an integer in [0, n]",
           detail::sample_field(index, "successes"));
    }
    out.n = ps->n;
    out.successes = ps->successes;
    out.p_hat = ps->successes / ps->n;
    return out;
  }
  const auto& vs = std::get<VarianceSummary>(sample);
  if (kind != SummaryKind::kVariance) {
    fail(ErrorCode::kIncompatibleSample,
         "variance summary given to a mean or proportion setting",
         detail::sample_field(index, "kind"));
  }
  detail::require_count(vs.n, 2, index);
  if (!(vs.variance > 0.0) || !std::isfinite(vs.variance)) {
    fail(ErrorCode::kDegenerateVariance, "a variance test needs s² > 0",
         detail::sample_field(index, "var"));
  }
  out.n = vs.n;
  out.variance = vs.variance;
  out.sd = std::sqrt(vs.variance);
  return out;
}

namespace detail {

inline void validate_config(const InferenceRequest& req) {
  const auto& c = req.config;
  if (!(c.alpha > 0.0 && c.alpha < 0.5)) {
    fail(ErrorCode::kInvalidParameter, "alpha must lie in (0, 0.5)", "alpha");
  }
  if (c.h0 && !std::isfinite(*c.h0)) {
    fail(ErrorCode::kInvalidParameter, "h0 must be finite", "h0");
  }
  for (auto [value, field] : {std::pair{c.sigma, "sigma"},
                              std::pair{c.sigma2, "sigma2"}}) {
    if (value && (!(*value > 0.0) || !std::isfinite(*value))) {
      fail(ErrorCode::kInvalidParameter, "sigma must be positive", field);
    }
  }
  const double h0 = c.h0.value_or(default_h0(req.setting));
  switch (req.setting) {
    case Setting::kOneProportion:
      if (!(h0 > 0.0 && h0 < 1.0)) {
        fail(ErrorCode::kInvalidParameter, "p0 must lie in (0, 1)", "h0");
      }
      break;
    case Setting::kTwoProportions:
      if (!(h0 > -1.0 && h0 < 1.0)) {
        fail(ErrorCode::kInvalidParameter,
             "null difference must lie in (-1, 1)", "h0");
      }
      if (c.pooled_se && h0 != 0.0) {
        fail(ErrorCode::kInvalidParameter,
             "the pooled standard error assumes a null difference of 0",
             "h0");
      }
      break;
    case Setting::kOneVariance:
    case Setting::kTwoVariances:
      if (!(h0 > 0.0)) {
        fail(ErrorCode::kInvalidParameter, "null variance must be positive",
             "h0");
      }
      break;
    default: break;
  }
  const std::size_t want = static_cast<std::size_t>(sample_count(req.setting));
  if (req.samples.size() != want) {
    fail(ErrorCode::kSchemaViolation,
         std::string(setting_tag(req.setting)) + " needs " +
             std::to_string(want) + " sample(s)",
         "samples");
  }
  if (c.sigma2 && !c.sigma) {
    fail(ErrorCode::kInvalidParameter, "sigma2 requires sigma", "sigma2");
  }
  if (req.setting == Setting::kTwoMeansIndependent && c.sigma.has_value() !=
                                                          c.sigma2.has_value()) {
    fail(ErrorCode::kInvalidParameter,
         "the two-sample z variant needs both sigma and sigma2", "sigma2");
  }
}

struct Tails {
  std::vector<double> critical;
  double p_value;
};

// Critical values and p-value for `stat` under `null`.
inline Tails tails(const NullDistribution& null, double stat, double alpha,
                   Alternative alt) {
  const auto model = null.model();
  Tails t;
  switch (alt) {
    case Alternative::kTwoSided:
      if (null.symmetric()) {
        const double c = dist::quantile(model, 1.0 - alpha / 2);
        t.critical = {-c, c};
        t.p_value = std::min(1.0, 2.0 * dist::sf(model, std::fabs(stat)));
      } else {
        t.critical = {dist::quantile(model, alpha / 2),
                      dist::quantile(model, 1.0 - alpha / 2)};
        t.p_value = std::min(
            1.0, 2.0 * std::min(dist::cdf(model, stat), dist::sf(model, stat)));
      }
      break;
    case Alternative::kGreater:
      t.critical = {dist::quantile(model, 1.0 - alpha)};
      t.p_value = dist::sf(model, stat);
      break;
    case Alternative::kLess:
      t.critical = {dist::quantile(model, alpha)};
      t.p_value = dist::cdf(model, stat);
      break;
  }
  if (std::isnan(t.p_value)) {
    fail(ErrorCode::kDomain, "the p-value is not computable for these inputs");
  }
  return t;
}

// est ∓ q·se in the requested sidedness.
inline void location_interval(InferenceResult& r, const NullDistribution& null,
                              double se) {
  const auto model = null.model();
  const double alpha = r.config.alpha;
  const auto alt = r.config.alternative;
  r.ci.sidedness = alt;
  r.ci.level = 1.0 - alpha;
  if (alt == Alternative::kTwoSided) {
    const double q = dist::quantile(model, 1.0 - alpha / 2);
    r.ci_quantiles = {q};
    r.ci.lower = r.estimate - q * se;
    r.ci.upper = r.estimate + q * se;
  } else {
    const double q = dist::quantile(model, 1.0 - alpha);
    r.ci_quantiles = {q};
    if (alt == Alternative::kGreater) {
      r.ci.lower = r.estimate - q * se;
      r.ci.upper = specfun::kInf;
    } else {
      r.ci.lower = -specfun::kInf;
      r.ci.upper = r.estimate + q * se;
    }
  }
}

// Interval for a scale parameter: numerator / quantile, bounded below by 0.
inline void scale_interval(InferenceResult& r, const NullDistribution& null,
                           double numerator) {
  const auto model = null.model();
  const double alpha = r.config.alpha;
  const auto alt = r.config.alternative;
  r.ci.sidedness = alt;
  r.ci.level = 1.0 - alpha;
  if (alt == Alternative::kTwoSided) {
    const double q_lo = dist::quantile(model, alpha / 2);
    const double q_hi = dist::quantile(model, 1.0 - alpha / 2);
    r.ci_quantiles = {q_lo, q_hi};
    r.ci.lower = numerator / q_hi;
    r.ci.upper = numerator / q_lo;
  } else if (alt == Alternative::kGreater) {
    const double q = dist::quantile(model, 1.0 - alpha);
    r.ci_quantiles = {q};
    r.ci.lower = numerator / q;
    r.ci.upper = specfun::kInf;
  } else {
    const double q = dist::quantile(model, alpha);
    r.ci_quantiles = {q};
    r.ci.lower = 0.0;
    r.ci.upper = numerator / q;
  }
}

inline void require_positive_se(double se, const char* what) {
  if (!(se > 0.0) || !std::isfinite(se)) {
    fail(ErrorCode::kDegenerateVariance,
         std::string(what) + ": standard error is zero", "samples");
  }
}

inline void one_mean(InferenceResult& r, const SampleSummary& s) {
  r.estimate = *s.mean;
  double se;
  NullDistribution null;
  if (r.config.sigma) {
    r.known_sigma = true;
    se = *r.config.sigma / std::sqrt(s.n);
    null = {StatisticFamily::kNormal};
  } else {
    se = *s.sd / std::sqrt(s.n);
    require_positive_se(se, "one-sample t");
    null = {StatisticFamily::kStudentT, s.n - 1};
  }
  r.standard_error = se;
  r.statistic = (r.estimate - r.h0) / se;
  r.null_distribution = null;
  location_interval(r, null, se);
}

inline void two_means(InferenceResult& r, const SampleSummary& a,
                      const SampleSummary& b) {
  r.estimate = *a.mean - *b.mean;
  double se;
  NullDistribution null;
  if (r.config.sigma) {
    r.known_sigma = true;
    const double s1 = *r.config.sigma;
    const double s2 = *r.config.sigma2;
    se = std::sqrt(s1 * s1 / a.n + s2 * s2 / b.n);
    null = {StatisticFamily::kNormal};
  } else if (r.config.equal_variances) {
    const double df = a.n + b.n - 2;
    const double sp2 =
        ((a.n - 1) * *a.variance + (b.n - 1) * *b.variance) / df;
    r.pooled_variance = sp2;
    se = std::sqrt(sp2) * std::sqrt(1.0 / a.n + 1.0 / b.n);
    require_positive_se(se, "pooled two-sample t");
    null = {StatisticFamily::kStudentT, df};
  } else {
    const double v1 = *a.variance / a.n;
    const double v2 = *b.variance / b.n;
    se = std::sqrt(v1 + v2);
    require_positive_se(se, "Welch two-sample t");
    const double df =
        (v1 + v2) * (v1 + v2) / (v1 * v1 / (a.n - 1) + v2 * v2 / (b.n - 1));
    null = {StatisticFamily::kStudentT, df};
  }
  r.standard_error = se;
  r.statistic = (r.estimate - r.h0) / se;
  r.null_distribution = null;
  location_interval(r, null, se);
}

inline bool shaky_normal_approximation(const SampleSummary& s) {
  const double n = s.n;
  const double p = *s.p_hat;
  return n * p < 5.0 || n * (1.0 - p) < 5.0;
}

inline void one_proportion(InferenceResult& r, const SampleSummary& s) {
  const double p = *s.p_hat;
  r.estimate = p;
  const double se0 = std::sqrt(r.h0 * (1.0 - r.h0) / s.n);
  r.standard_error = se0;
  r.statistic = (p - r.h0) / se0;
  r.null_distribution = {StatisticFamily::kNormal};
  const double se_ci = std::sqrt(p * (1.0 - p) / s.n);
  r.ci_standard_error = se_ci;
  location_interval(r, r.null_distribution, se_ci);
  r.approximation_warning = shaky_normal_approximation(s);
}

inline void two_proportions(InferenceResult& r, const SampleSummary& a,
                            const SampleSummary& b) {
  const double p1 = *a.p_hat;
  const double p2 = *b.p_hat;
  r.estimate = p1 - p2;
  const double unpooled =
      std::sqrt(p1 * (1 - p1) / a.n + p2 * (1 - p2) / b.n);
  double se = unpooled;
  if (r.config.pooled_se) {
    const double pbar = (*a.successes + *b.successes) / (a.n + b.n);
    r.pooled_proportion = pbar;
    se = std::sqrt(pbar * (1 - pbar) * (1.0 / a.n + 1.0 / b.n));
  }
  require_positive_se(se, "two-proportion z");
  r.standard_error = se;
  r.ci_standard_error = unpooled;
  r.statistic = (r.estimate - r.h0) / se;
  r.null_distribution = {StatisticFamily::kNormal};
  location_interval(r, r.null_distribution, unpooled);
  r.approximation_warning =
      shaky_normal_approximation(a) || shaky_normal_approximation(b);
}

inline void one_variance(InferenceResult& r, const SampleSummary& s) {
  const double df = s.n - 1;
  r.estimate = *s.variance;
  r.statistic = df * *s.variance / r.h0;
  r.null_distribution = {StatisticFamily::kChiSquare, df};
  scale_interval(r, r.null_distribution, df * *s.variance);
}

inline void two_variances(InferenceResult& r, const SampleSummary& a,
                          const SampleSummary& b) {
  const double ratio = *a.variance / *b.variance;
  r.estimate = ratio;
  r.statistic = ratio / r.h0;
  r.null_distribution = {StatisticFamily::kFisher, a.n - 1, b.n - 1};
  scale_interval(r, r.null_distribution, ratio);
}

}  // namespace detail

/// Numeric part of a test: summaries, CI, statistic, critical values,
/// p-value and decision. run_test adds the narrative and plot.
inline InferenceResult compute(const InferenceRequest& req) {
  detail::validate_config(req);
  InferenceResult r;
  r.setting = req.setting;
  r.config = req.config;
  r.h0 = req.config.h0.value_or(default_h0(req.setting));
  const SummaryKind kind = summary_kind(req.setting);

  for (std::size_t i = 0; i < req.samples.size(); ++i) {
    if (const auto* raw = std::get_if<RawSample>(&req.samples[i])) {
      r.observations.push_back(raw->observations);
    }
  }

  if (req.setting == Setting::kTwoMeansPaired) {
    const auto* x1 = std::get_if<RawSample>(&req.samples[0]);
    const auto* x2 = std::get_if<RawSample>(&req.samples[1]);
    if (!x1 || !x2) {
      fail(ErrorCode::kIncompatibleSample,
           "paired samples must be given as raw data", "samples");
    }
    if (x1->observations.size() != x2->observations.size()) {
      fail(ErrorCode::kLengthMismatch,
           "paired samples must have the same length", "samples[1].data");
    }
    r.summaries.push_back(summarize(req.samples[0], kind, 0));
    r.summaries.push_back(summarize(req.samples[1], kind, 1));
    r.differences.reserve(x1->observations.size());
    for (std::size_t i = 0; i < x1->observations.size(); ++i) {
      r.differences.push_back(x1->observations[i] - x2->observations[i]);
    }
    r.difference_summary = summarize(RawSample{r.differences}, kind, 0);
    detail::one_mean(r, *r.difference_summary);
  } else {
    for (std::size_t i = 0; i < req.samples.size(); ++i) {
      r.summaries.push_back(summarize(req.samples[i], kind, i));
    }
    switch (req.setting) {
      case Setting::kOneMean: detail::one_mean(r, r.summaries[0]); break;
      case Setting::kTwoMeansIndependent:
        detail::two_means(r, r.summaries[0], r.summaries[1]);
        break;
      case Setting::kOneProportion:
        detail::one_proportion(r, r.summaries[0]);
        break;
      case Setting::kTwoProportions:
        detail::two_proportions(r, r.summaries[0], r.summaries[1]);
        break;
      case Setting::kOneVariance: detail::one_variance(r, r.summaries[0]); break;
      case Setting::kTwoVariances:
        detail::two_variances(r, r.summaries[0], r.summaries[1]);
        break;
      case Setting::kTwoMeansPaired: break;
    }
  }
  if (!std::isfinite(r.statistic)) {
    fail(ErrorCode::kDegenerateVariance, "test statistic is not finite",
         "samples");
  }
  const auto t = detail::tails(r.null_distribution, r.statistic,
                               r.config.alpha, r.config.alternative);
  r.critical_values = t.critical;
  r.p_value = t.p_value;
  r.decision =
      r.p_value < r.config.alpha ? Decision::kReject : Decision::kFailToReject;
  return r;
}

/// Whether `stat` lies in the rejection region described by the critical
/// values of `r`.
inline bool in_rejection_region(const InferenceResult& r, double stat) {
  switch (r.config.alternative) {
    case Alternative::kTwoSided:
      return stat <= r.critical_values[0] || stat >= r.critical_values[1];
    case Alternative::kGreater: return stat >= r.critical_values[0];
    case Alternative::kLess: return stat <= r.critical_values[0];
  }
  return false;
}

inline ConfidenceInterval confidence_interval(const InferenceRequest& req) {
  return compute(req).ci;
}

/// Density of the null distribution with the rejection region shaded and
/// the observed statistic marked. Families on [0, ∞) start at 0 when the
/// density is finite there.
inline dist::PlotData rejection_plot(const InferenceResult& r) {
  const auto model = r.null_distribution.model();
  double start = dist::quantile(model, dist::kPlotLowerQuantile);
  double end = dist::quantile(model, dist::kPlotUpperQuantile);
  if (!r.null_distribution.symmetric()) {
    const double at_zero = std::visit(
        [](const auto& d) {
          if constexpr (std::decay_t<decltype(d)>::kDiscrete) {
            return 0.0;
          } else {
            return d.pdf(0.0);
          }
        },
        model.variant());
    if (std::isfinite(at_zero)) start = 0.0;
  }
  for (double c : r.critical_values) {
    start = std::min(start, c);
    end = std::max(end, c);
  }
  const double span = end - start;
  // Keep far-out statistics visible without stretching the grid unboundedly.
  const double lo_cap = start - 2.0 * span;
  const double hi_cap = end + 2.0 * span;
  const double marker = r.statistic;
  if (marker < start) start = std::max(marker, lo_cap);
  if (marker > end) end = std::min(marker, hi_cap);
  if (!r.null_distribution.symmetric()) start = std::max(start, 0.0);
  dist::PlotData plot = dist::density_grid(model, start, end);
  plot.marker = marker;
  const double first = plot.grid.front();
  const double last = plot.grid.back();
  switch (r.config.alternative) {
    case Alternative::kTwoSided:
      dist::detail::clip_shaded(plot, first, r.critical_values[0]);
      dist::detail::clip_shaded(plot, r.critical_values[1], last);
      break;
    case Alternative::kGreater:
      dist::detail::clip_shaded(plot, r.critical_values[0], last);
      break;
    case Alternative::kLess:
      dist::detail::clip_shaded(plot, first, r.critical_values[0]);
      break;
  }
  return plot;
}

namespace detail {

inline std::string_view parameter_phrase(Setting s) {
  switch (s) {
    case Setting::kOneMean: return "the population mean";
    case Setting::kTwoMeansIndependent:
      return "the difference between the two population means";
    case Setting::kTwoMeansPaired: return "the mean of the paired differences";
    case Setting::kOneProportion: return "the population proportion";
    case Setting::kTwoProportions:
      return "the difference between the two population proportions";
    case Setting::kOneVariance: return "the population variance";
    case Setting::kTwoVariances:
      return "the ratio of the two population variances";
  }
  return "";
}

inline std::string_view relation_phrase(Alternative a) {
  switch (a) {
    case Alternative::kTwoSided: return "different from";
    case Alternative::kGreater: return "greater than";
    case Alternative::kLess: return "less than";
  }
  return "";
}

}  // namespace detail

/// Template and values of the plain-language conclusion; `interpret`
/// renders it.
inline Step interpretation_step(const InferenceResult& r, double alpha) {
  const bool reject = r.p_value < alpha;
  std::string t;
  if (reject) {
    t = "At the {{alpha}} significance level, we reject the null hypothesis "
        "(p-value {{p:p}}). The data provide evidence that ";
  } else {
    t = "At the {{alpha}} significance level, we do not reject the null "
        "hypothesis (p-value {{p:p}}). The data do not provide sufficient "
        "evidence that ";
  }
  t += std::string(detail::parameter_phrase(r.setting)) + " is " +
       std::string(detail::relation_phrase(r.config.alternative)) +
       " {{h0}}.";
  return text_step(std::move(t), {{"alpha", alpha}, {"p", r.p_value},
                                  {"h0", r.h0}});
}

inline std::string interpret(const InferenceResult& r, double alpha) {
  return interpretation_step(r, alpha).display;
}

}  // namespace statlab::inference

namespace statlab::narrative {
inline DerivationDocument test_document(const inference::InferenceResult& result);
}  // namespace statlab::narrative

namespace statlab::inference {

/// Full test: numbers, four-section narrative and rejection-region plot.
inline InferenceResult run_test(const InferenceRequest& req) {
  InferenceResult r = compute(req);
  r.plot = rejection_plot(r);
  r.narrative = narrative::test_document(r);
  return r;
}

}  // namespace statlab::inference

#include "statlab/narrative.hpp"
