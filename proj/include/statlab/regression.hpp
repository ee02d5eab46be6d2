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

// Simple linear regression y = β0 + β1 x + ε: validation, least-squares fit,
// coefficient inference, mean-response confidence band and residual
// diagnostics.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "statlab/derivation.hpp"
#include "statlab/distributions.hpp"
#include "statlab/error.hpp"
#include "statlab/specfun.hpp"

namespace statlab::regression {

struct RegressionInput {
  std::vector<double> x;
  std::vector<double> y;
  std::string x_label = "x";
  std::string y_label = "y";
  double confidence_level = 0.95;
  bool include_band = true;
};

/// Throws unless x and y are finite and of equal length, x takes at least
/// two distinct values, and n >= 3.
inline const RegressionInput& validate(const RegressionInput& in) {
  if (in.x.size() != in.y.size()) {
    fail(ErrorCode::kLengthMismatch,
         "x and y must have the same length (got " +
             std::to_string(in.x.size()) + " and " +
             std::to_string(in.y.size()) + ")",
         "y");
  }
  for (double v : in.x) {
    if (!std::isfinite(v)) {
      fail(ErrorCode::kNonFiniteValue, "x values must be finite", "x");
    }
  }
  for (double v : in.y) {
    if (!std::isfinite(v)) {
      fail(ErrorCode::kNonFiniteValue, "y values must be finite", "y");
    }
  }
  if (std::set<double>(in.x.begin(), in.x.end()).size() < 2) {
    fail(ErrorCode::kDegenerateX, "x must contain more than one distinct value",
         "x");
  }
  if (in.x.size() < 3) {
    fail(ErrorCode::kTooFewObservations, "need at least 3 observations", "x");
  }
  if (!(in.confidence_level > 0.0 && in.confidence_level < 1.0)) {
    fail(ErrorCode::kInvalidParameter, "confidence_level must lie in (0, 1)",
         "confidence_level");
  }
  return in;
}

struct RegressionFit {
  double n = 0;
  double x_mean = 0;
  double y_mean = 0;
  double sum_xy = 0;      // Σ xᵢyᵢ
  double sxx = 0;         // Σ (xᵢ − x̄)²
  double syy = 0;         // Σ (yᵢ − ȳ)²
  double sxy = 0;         // Σ xᵢyᵢ − n x̄ ȳ
  double beta0 = 0;
  double beta1 = 0;
  double sse = 0;
  double sigma_hat = 0;
  double df_resid = 0;
  double se_beta0 = 0;
  double se_beta1 = 0;
  /// Unset when the fit is exact (σ̂ = 0): the t and p values do not exist.
  std::optional<double> t0;
  std::optional<double> t1;
  std::optional<double> p0;
  std::optional<double> p1;
  bool degenerate = false;
  double r_squared = 0;
  double adj_r_squared = 0;
  std::vector<double> fitted;
  std::vector<double> residuals;
};

/// Least-squares fit. The slope numerator Σxᵢyᵢ − n x̄ ȳ is accumulated in
/// centred form Σ(xᵢ − x̄)(yᵢ − ȳ), which is the same quantity without the
/// cancellation on large-magnitude data.
inline RegressionFit fit(const RegressionInput& input) {
  validate(input);
  const auto& x = input.x;
  const auto& y = input.y;
  RegressionFit f;
  const std::size_t n = x.size();
  f.n = static_cast<double>(n);
  specfun::CompensatedSum sx, sy, sxy_raw;
  for (std::size_t i = 0; i < n; ++i) {
    sx.add(x[i]);
    sy.add(y[i]);
    sxy_raw.add(x[i] * y[i]);
  }
  f.x_mean = sx.value() / f.n;
  f.y_mean = sy.value() / f.n;
  f.sum_xy = sxy_raw.value();
  specfun::CompensatedSum sxx, syy, sxy;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - f.x_mean;
    const double dy = y[i] - f.y_mean;
    sxx.add(dx * dx);
    syy.add(dy * dy);
    sxy.add(dx * dy);
  }
  f.sxx = sxx.value();
  f.syy = syy.value();
  f.sxy = sxy.value();
  f.beta1 = f.sxy / f.sxx;
  f.beta0 = f.y_mean - f.beta1 * f.x_mean;

  f.fitted.resize(n);
  f.residuals.resize(n);
  specfun::CompensatedSum sse;
  for (std::size_t i = 0; i < n; ++i) {
    f.fitted[i] = f.beta0 + f.beta1 * x[i];
    f.residuals[i] = y[i] - f.fitted[i];
    sse.add(f.residuals[i] * f.residuals[i]);
  }
  f.sse = sse.value();
  f.df_resid = f.n - 2;
  f.sigma_hat = std::sqrt(f.sse / f.df_resid);
  f.se_beta1 = f.sigma_hat / std::sqrt(f.sxx);
  f.se_beta0 =
      f.sigma_hat * std::sqrt(1.0 / f.n + f.x_mean * f.x_mean / f.sxx);
  // Residuals at rounding level relative to the spread of y count as an
  // exact fit.
  f.degenerate = f.syy == 0.0 || f.sse <= 1e-20 * f.syy;
  f.r_squared = f.syy == 0.0 ? 1.0 : 1.0 - f.sse / f.syy;
  f.adj_r_squared = 1.0 - (1.0 - f.r_squared) * (f.n - 1) / (f.n - 2);
  if (!f.degenerate) {
    const auto t = dist::Distribution::student_t(f.df_resid);
    f.t0 = f.beta0 / f.se_beta0;
    f.t1 = f.beta1 / f.se_beta1;
    f.p0 = std::min(1.0, 2.0 * dist::sf(t, std::fabs(*f.t0)));
    f.p1 = std::min(1.0, 2.0 * dist::sf(t, std::fabs(*f.t1)));
  }
  return f;
}

namespace detail {

// Labels end up inside templates; keep them from opening a placeholder.
inline std::string sanitize_label(std::string s) {
  std::string::size_type pos = 0;
  while ((pos = s.find("{{", pos)) != std::string::npos) {
    s.insert(pos + 1, " ");
    pos += 2;
  }
  pos = 0;
  while ((pos = s.find("}}", pos)) != std::string::npos) {
    s.insert(pos + 1, " ");
    pos += 2;
  }
  return s;
}

}  // namespace detail

/// Four steps: sample means and n; the two sums; β̂₁ with its numbers
/// substituted; β̂₀ likewise.
inline DerivationDocument derivation(const RegressionInput& /*input*/,
                                     const RegressionFit& f) {
  Section s{"Step-by-step derivation", {}};
  s.steps.push_back(make_step(
      "\\bar{x} = {{xbar}}, \\quad \\bar{y} = {{ybar}}, \\quad n = {{n}}",
      {{"xbar", f.x_mean}, {"ybar", f.y_mean}, {"n", f.n}}));
  s.steps.push_back(make_step(
      "\\sum_{i=1}^{n} x_i y_i = {{sum_xy}}, \\quad "
      "\\sum_{i=1}^{n} (x_i - \\bar{x})^2 = {{sxx}}",
      {{"sum_xy", f.sum_xy}, {"sxx", f.sxx}}));
  s.steps.push_back(make_step(
      "\\hat{\\beta}_1 = \\frac{\\left(\\sum_{i=1}^{n} x_i y_i\\right) - "
      "n\\bar{x}\\bar{y}}{\\sum_{i=1}^{n} (x_i - \\bar{x})^2} = "
      "\\frac{{{sum_xy}} - {{n}} \\times {{xbar}} \\times {{ybar}}}{{{sxx}}} "
      "= \\frac{{{numerator}}}{{{sxx}}} = {{beta1}}",
      {{"sum_xy", f.sum_xy},
       {"n", f.n},
       {"xbar", f.x_mean},
       {"ybar", f.y_mean},
       {"sxx", f.sxx},
       {"numerator", f.sxy},
       {"beta1", f.beta1}}));
  s.steps.push_back(make_step(
      "\\hat{\\beta}_0 = \\bar{y} - \\hat{\\beta}_1 \\bar{x} = {{ybar}} - "
      "{{beta1}} \\times {{xbar}} = {{beta0}}",
      {{"ybar", f.y_mean},
       {"beta1", f.beta1},
       {"xbar", f.x_mean},
       {"beta0", f.beta0}}));
  return {"Simple linear regression", {std::move(s)}};
}

struct CoefficientRow {
  std::string term;
  double estimate = 0;
  double std_error = 0;
  std::optional<double> t_value;
  std::optional<double> p_value;
};

struct CoefficientTable {
  std::vector<CoefficientRow> rows;
  double sigma_hat = 0;
  double df_resid = 0;
  double r_squared = 0;
  double adj_r_squared = 0;
  bool degenerate = false;
};

inline CoefficientTable summary_table(const RegressionFit& f) {
  CoefficientTable t;
  t.rows.push_back({"(Intercept)", f.beta0, f.se_beta0, f.t0, f.p0});
  t.rows.push_back({"x", f.beta1, f.se_beta1, f.t1, f.p1});
  t.sigma_hat = f.sigma_hat;
  t.df_resid = f.df_resid;
  t.r_squared = f.r_squared;
  t.adj_r_squared = f.adj_r_squared;
  t.degenerate = f.degenerate;
  return t;
}

struct ConfidenceBand {
  std::vector<double> grid;
  std::vector<double> fit;
  std::vector<double> lower;
  std::vector<double> upper;
  double level = 0.95;
};

inline constexpr int kBandGridPoints = 128;

inline void require_nondegenerate(const RegressionFit& f) {
  if (f.degenerate) {
    fail(ErrorCode::kDegenerateFit,
         "the data lie exactly on a line; sigma-hat is zero");
  }
}

/// Pointwise band for E[y | x₀]:
/// ŷ(x₀) ∓ t_{α/2, n−2} σ̂ √(1/n + (x₀ − x̄)² / Σ(xᵢ − x̄)²).
inline ConfidenceBand confidence_band(const RegressionInput& input,
                                      const RegressionFit& f) {
  require_nondegenerate(f);
  ConfidenceBand band;
  band.level = input.confidence_level;
  const double alpha = 1.0 - input.confidence_level;
  const double t = dist::quantile(dist::Distribution::student_t(f.df_resid),
                                  1.0 - alpha / 2);
  const auto [lo_it, hi_it] = std::minmax_element(input.x.begin(), input.x.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  for (int i = 0; i < kBandGridPoints; ++i) {
    const double x0 =
        i + 1 == kBandGridPoints ? hi : lo + (hi - lo) * i / (kBandGridPoints - 1);
    const double yhat = f.beta0 + f.beta1 * x0;
    const double d = x0 - f.x_mean;
    const double half = t * f.sigma_hat * std::sqrt(1.0 / f.n + d * d / f.sxx);
    band.grid.push_back(x0);
    band.fit.push_back(yhat);
    band.lower.push_back(yhat - half);
    band.upper.push_back(yhat + half);
  }
  return band;
}

struct Point {
  double x;
  double y;
};

struct DiagnosticsBundle {
  std::vector<Point> residuals_vs_fitted;
  /// (theoretical normal quantile, sorted standardized residual).
  std::vector<Point> qq_points;
  /// (fitted, √|standardized residual|); points with hᵢᵢ = 1 are omitted.
  std::vector<Point> scale_location;
  std::vector<double> leverage;
  std::vector<std::optional<double>> cooks_distance;
  /// Unset where hᵢᵢ = 1 and the residual carries no information.
  std::vector<std::optional<double>> standardized_residuals;
};

inline DiagnosticsBundle diagnostics(const RegressionInput& input,
                                     const RegressionFit& f) {
  require_nondegenerate(f);
  DiagnosticsBundle d;
  const std::size_t n = input.x.size();
  std::vector<double> available;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = input.x[i] - f.x_mean;
    const double h = 1.0 / f.n + dx * dx / f.sxx;
    d.leverage.push_back(h);
    d.residuals_vs_fitted.push_back({f.fitted[i], f.residuals[i]});
    if (1.0 - h <= 1e-12) {
      d.standardized_residuals.push_back(std::nullopt);
      d.cooks_distance.push_back(std::nullopt);
      continue;
    }
    const double r = f.residuals[i] / (f.sigma_hat * std::sqrt(1.0 - h));
    d.standardized_residuals.push_back(r);
    d.cooks_distance.push_back(r * r * h / (2.0 * (1.0 - h)));
    d.scale_location.push_back({f.fitted[i], std::sqrt(std::fabs(r))});
    available.push_back(r);
  }
  std::sort(available.begin(), available.end());
  const auto normal = dist::Distribution::normal(0, 1);
  const double m = static_cast<double>(available.size());
  for (std::size_t i = 0; i < available.size(); ++i) {
    const double p = (static_cast<double>(i) + 0.5) / m;
    d.qq_points.push_back({dist::quantile(normal, p), available[i]});
  }
  return d;
}

/// Plain-language reading of the slope and intercept, each in a
/// significant or no-evidence variant at level `alpha`.
inline std::vector<Step> interpretation_steps(const RegressionFit& f,
                                              const std::string& x_label,
                                              const std::string& y_label,
                                              double alpha = 0.05) {
  const std::string xl = detail::sanitize_label(x_label);
  const std::string yl = detail::sanitize_label(y_label);
  std::vector<Step> steps;
  if (f.degenerate) {
    steps.push_back(text_step(
        "The points lie exactly on the fitted line: for each unit increase in " +
            xl + ", " + yl + " changes by {{beta1}}, and when " + xl +
            " equals 0, " + yl +
            " equals {{beta0}}. With no residual variation, standard errors, "
            "t-statistics and p-values are not defined.",
        {{"beta1", f.beta1}, {"beta0", f.beta0}}));
    return steps;
  }
  const double pct = 100.0 * alpha;
  if (*f.p1 < alpha) {
    steps.push_back(text_step(
        "For each unit increase in " + xl + ", " + yl +
            " changes by {{beta1}} on average. This slope is significantly "
            "different from zero at the {{pct}}% level (p-value {{p1:p}}).",
        {{"beta1", f.beta1}, {"pct", pct}, {"p1", *f.p1}}));
  } else {
    steps.push_back(text_step(
        "For each unit increase in " + xl + ", " + yl +
            " changes by {{beta1}} on average, but there is no evidence at "
            "the {{pct}}% level that this slope differs from zero "
            "(p-value {{p1:p}}): the data do not show a linear relationship "
            "between " + xl + " and " + yl + ".",
        {{"beta1", f.beta1}, {"pct", pct}, {"p1", *f.p1}}));
  }
  if (*f.p0 < alpha) {
    steps.push_back(text_step(
        "When " + xl + " equals 0, the expected value of " + yl +
            " is {{beta0}}. This intercept is significantly different from "
            "zero at the {{pct}}% level (p-value {{p0:p}}).",
        {{"beta0", f.beta0}, {"pct", pct}, {"p0", *f.p0}}));
  } else {
    steps.push_back(text_step(
        "When " + xl + " equals 0, the expected value of " + yl +
            " is {{beta0}}, but there is no evidence at the {{pct}}% level "
            "that the intercept differs from zero (p-value {{p0:p}}).",
        {{"beta0", f.beta0}, {"pct", pct}, {"p0", *f.p0}}));
  }
  return steps;
}

inline std::string interpret_fit(const RegressionFit& f,
                                 const std::string& x_label,
                                 const std::string& y_label,
                                 double alpha = 0.05) {
  std::string out;
  for (const auto& s : interpretation_steps(f, x_label, y_label, alpha)) {
    if (!out.empty()) out += ' ';
    out += s.display;
  }
  return out;
}

}  // namespace statlab::regression
