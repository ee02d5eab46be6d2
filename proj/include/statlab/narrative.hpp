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

// Document assembly: the Solution/Details document of a probability query,
// the four-section narrative of a test, the plain-text rendering of TeX used
// by the CLI, and the self-contained HTML regression report.

#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "statlab/derivation.hpp"
#include "statlab/display.hpp"
#include "statlab/distributions.hpp"
#include "statlab/inference.hpp"
#include "statlab/regression.hpp"

namespace statlab::narrative {

// --- Distributions ---------------------------------------------------------

namespace detail {

struct FamilyTex {
  std::string_view notation;
  std::string_view density;
};

// "X \sim ..." and the PDF/PMF with the parameters substituted. Placeholder
// names are the canonical parameter names of the catalog.
inline FamilyTex family_tex(dist::Family f) {
  using dist::Family;
  switch (f) {
    case Family::kBeta:
      return {"X \\sim \\text{Beta}(\\alpha = {{alpha}}, \\beta = {{beta}})",
              "f(x) = \\frac{x^{{{alpha}} - 1}(1 - x)^{{{beta}} - 1}}"
              "{B({{alpha}}, {{beta}})}, \\quad 0 \\leq x \\leq 1"};
    case Family::kBinomial:
      return {"X \\sim \\text{Bin}(n = {{n}}, p = {{p}})",
              "P(X = x) = \\binom{{{n}}}{x} {{p}}^x (1 - {{p}})^{{{n}} - x}, "
              "\\quad x = 0, 1, \\ldots, {{n}}"};
    case Family::kCauchy:
      return {"X \\sim \\text{Cauchy}(x_0 = {{location}}, \\gamma = {{scale}})",
              "f(x) = \\frac{1}{\\pi \\times {{scale}} \\left[1 + "
              "\\left(\\frac{x - {{location}}}{{{scale}}}\\right)^2\\right]}"};
    case Family::kChiSquare:
      return {"X \\sim \\chi^2({{df}})",
              "f(x) = \\frac{1}{2^{{{df}}/2}\\,\\Gamma({{df}}/2)} "
              "x^{{{df}}/2 - 1} e^{-x/2}, \\quad x \\geq 0"};
    case Family::kExponential:
      return {"X \\sim \\text{Exp}(\\lambda = {{rate}})",
              "f(x) = {{rate}} e^{-{{rate}} x}, \\quad x \\geq 0"};
    case Family::kFisher:
      return {"X \\sim F({{df1}}, {{df2}})",
              "f(x) = \\frac{1}{x\\,B({{df1}}/2, {{df2}}/2)} "
              "\\sqrt{\\frac{({{df1}} x)^{{{df1}}} \\times {{df2}}^{{{df2}}}}"
              "{({{df1}} x + {{df2}})^{{{df1}} + {{df2}}}}}, \\quad x > 0"};
    case Family::kGamma:
      return {"X \\sim \\text{Gamma}(\\alpha = {{shape}}, \\beta = {{rate}})",
              "f(x) = \\frac{{{rate}}^{{{shape}}}}{\\Gamma({{shape}})} "
              "x^{{{shape}} - 1} e^{-{{rate}} x}, \\quad x \\geq 0"};
    case Family::kGeometricTrials:
      return {"X \\sim \\text{Geom}(p = {{p}})",
              "P(X = x) = (1 - {{p}})^{x - 1} \\times {{p}}, "
              "\\quad x = 1, 2, \\ldots"};
    case Family::kGeometricFailures:
      return {"X \\sim \\text{Geom}_0(p = {{p}})",
              "P(X = x) = (1 - {{p}})^{x} \\times {{p}}, "
              "\\quad x = 0, 1, \\ldots"};
    case Family::kHypergeometric:
      return {"X \\sim \\text{HG}(N = {{population}}, K = {{successes}}, "
              "n = {{draws}})",
              "P(X = x) = \\frac{\\binom{{{successes}}}{x}"
              "\\binom{{{population}} - {{successes}}}{{{draws}} - x}}"
              "{\\binom{{{population}}}{{{draws}}}}"};
    case Family::kLogistic:
      return {"X \\sim \\text{Logistic}(\\mu = {{location}}, s = {{scale}})",
              "f(x) = \\frac{e^{-(x - {{location}})/{{scale}}}}"
              "{{{scale}} \\left(1 + e^{-(x - {{location}})/{{scale}}}"
              "\\right)^2}"};
    case Family::kLogNormal:
      return {"X \\sim \\text{LN}(\\mu = {{meanlog}}, \\sigma = {{sdlog}})",
              "f(x) = \\frac{1}{x \\times {{sdlog}} \\sqrt{2\\pi}} "
              "e^{-\\frac{(\\ln x - {{meanlog}})^2}{2 \\times {{sdlog}}^2}}, "
              "\\quad x > 0"};
    case Family::kNegBinomialSizeProb:
      return {"X \\sim \\text{NB}(r = {{size}}, p = {{prob}})",
              "P(X = x) = \\frac{\\Gamma(x + {{size}})}{\\Gamma({{size}})\\, "
              "x!} {{prob}}^{{{size}}} (1 - {{prob}})^x, "
              "\\quad x = 0, 1, \\ldots"};
    case Family::kNegBinomialMeanSize:
      return {"X \\sim \\text{NB}(\\mu = {{mean}}, r = {{size}})",
              "P(X = x) = \\frac{\\Gamma(x + {{size}})}{\\Gamma({{size}})\\, "
              "x!} \\left(\\frac{{{size}}}{{{size}} + {{mean}}}\\right)"
              "^{{{size}}} \\left(\\frac{{{mean}}}{{{size}} + {{mean}}}"
              "\\right)^x, \\quad x = 0, 1, \\ldots"};
    case Family::kNormal:
      return {"X \\sim \\mathcal{N}(\\mu = {{mu}}, \\sigma^2 = {{var}})",
              "f(x) = \\frac{1}{\\sqrt{2\\pi \\times {{var}}}} "
              "e^{-\\frac{(x - {{mu}})^2}{2 \\times {{var}}}}"};
    case Family::kPoisson:
      return {"X \\sim \\text{Pois}(\\lambda = {{lambda}})",
              "P(X = x) = \\frac{{{lambda}}^x e^{-{{lambda}}}}{x!}, "
              "\\quad x = 0, 1, \\ldots"};
    case Family::kStudentT:
      return {"X \\sim t({{df}})",
              "f(x) = \\frac{\\Gamma\\left(\\frac{{{df}} + 1}{2}\\right)}"
              "{\\sqrt{{{df}} \\pi}\\,\\Gamma\\left(\\frac{{{df}}}{2}\\right)} "
              "\\left(1 + \\frac{x^2}{{{df}}}\\right)^{-\\frac{{{df}} + 1}{2}}"};
    case Family::kWeibull:
      return {"X \\sim \\text{Weibull}(k = {{shape}}, \\lambda = {{scale}})",
              "f(x) = \\frac{{{shape}}}{{{scale}}} "
              "\\left(\\frac{x}{{{scale}}}\\right)^{{{shape}} - 1} "
              "e^{-(x/{{scale}})^{{{shape}}}}, \\quad x \\geq 0"};
  }
  return {};
}

inline std::map<std::string, double> param_values(
    const dist::Distribution& model) {
  std::map<std::string, double> v;
  for (const auto& [name, value] : model.params()) v[name] = value;
  return v;
}

inline Step moment_step(std::string_view symbol,
                        const std::optional<double>& value) {
  if (!value) return make_step(std::string(symbol) + " = \\text{undefined}", {});
  return make_step(std::string(symbol) + " = {{value}}", {{"value", *value}});
}

}  // namespace detail

/// Two sections: "Solution" (the law of X and the probability statement)
/// and "Details" (PDF or PMF followed by E(X), SD(X) and Var(X)).
inline DerivationDocument distribution_document(
    const dist::Distribution& model, const dist::ProbabilityQuery& q,
    double value, const dist::Moments& m) {
  const auto tex = detail::family_tex(model.family());
  const auto params = detail::param_values(model);

  Section solution{"Solution", {}};
  solution.steps.push_back(make_step(std::string(tex.notation), params));
  switch (q.kind) {
    case dist::QueryKind::kLowerTail:
      solution.steps.push_back(make_step("P(X \\leq {{x}}) = {{value:4}}",
                                         {{"x", q.a}, {"value", value}}));
      break;
    case dist::QueryKind::kUpperTail:
      solution.steps.push_back(make_step(
          "P(X > {{x}}) = 1 - P(X \\leq {{x}}) = {{value:4}}",
          {{"x", q.a}, {"value", value}}));
      break;
    case dist::QueryKind::kInterval:
      solution.steps.push_back(make_step(
          "P({{a}} \\leq X \\leq {{b}}) = {{value:4}}",
          {{"a", q.a}, {"b", q.b}, {"value", value}}));
      break;
  }

  Section details{"Details", {}};
  details.steps.push_back(make_step(std::string(tex.density), params));
  details.steps.push_back(detail::moment_step("E(X)", m.mean));
  details.steps.push_back(detail::moment_step("SD(X)", m.sd));
  details.steps.push_back(detail::moment_step("Var(X)", m.variance));

  return {std::string(dist::family_info(model.family()).display_name),
          {std::move(solution), std::move(details)}};
}

// --- Tests -----------------------------------------------------------------

namespace detail {

using inference::Alternative;
using inference::InferenceResult;
using inference::Setting;
using inference::StatisticFamily;

inline std::string_view parameter_symbol(Setting s) {
  switch (s) {
    case Setting::kOneMean: return "\\mu";
    case Setting::kTwoMeansIndependent: return "\\mu_1 - \\mu_2";
    case Setting::kTwoMeansPaired: return "\\mu_D";
    case Setting::kOneProportion: return "p";
    case Setting::kTwoProportions: return "p_1 - p_2";
    case Setting::kOneVariance: return "\\sigma^2";
    case Setting::kTwoVariances: return "\\sigma_1^2 / \\sigma_2^2";
  }
  return "";
}

inline std::string_view alternative_relation(Alternative a) {
  switch (a) {
    case Alternative::kTwoSided: return "\\neq";
    case Alternative::kGreater: return ">";
    case Alternative::kLess: return "<";
  }
  return "";
}

// Symbols of the observed statistic and of its null random variable.
inline std::string_view observed_symbol(StatisticFamily f) {
  switch (f) {
    case StatisticFamily::kNormal: return "z_{obs}";
    case StatisticFamily::kStudentT: return "t_{obs}";
    case StatisticFamily::kChiSquare: return "\\chi^2_{obs}";
    case StatisticFamily::kFisher: return "F_{obs}";
  }
  return "";
}

inline std::string_view variable_symbol(StatisticFamily f) {
  switch (f) {
    case StatisticFamily::kNormal: return "Z";
    case StatisticFamily::kStudentT: return "T";
    case StatisticFamily::kChiSquare: return "X^2";
    case StatisticFamily::kFisher: return "F";
  }
  return "";
}

// Symbolic degrees of freedom as they appear in quantile subscripts.
inline std::string df_symbol(const InferenceResult& r) {
  switch (r.null_distribution.family) {
    case StatisticFamily::kNormal: return "";
    case StatisticFamily::kStudentT:
      if (r.setting == Setting::kTwoMeansIndependent) {
        return r.config.equal_variances ? ", n_1 + n_2 - 2" : ", \\nu";
      }
      return ", n - 1";
    case StatisticFamily::kChiSquare: return ", n - 1";
    case StatisticFamily::kFisher: return ", n_1 - 1, n_2 - 1";
  }
  return "";
}

// Numeric degrees of freedom for the same subscripts.
inline std::string df_values(const InferenceResult& r) {
  switch (r.null_distribution.family) {
    case StatisticFamily::kNormal: return "";
    case StatisticFamily::kStudentT:
    case StatisticFamily::kChiSquare: return ", {{df1}}";
    case StatisticFamily::kFisher: return ", {{df1}}, {{df2}}";
  }
  return "";
}

inline std::string quantile_letter(StatisticFamily f) {
  switch (f) {
    case StatisticFamily::kNormal: return "z";
    case StatisticFamily::kStudentT: return "t";
    case StatisticFamily::kChiSquare: return "\\chi^2";
    case StatisticFamily::kFisher: return "F";
  }
  return "";
}

inline std::map<std::string, double> base_values(const InferenceResult& r) {
  std::map<std::string, double> v{{"alpha", r.config.alpha},
                                  {"h0", r.h0},
                                  {"stat", r.statistic},
                                  {"p", r.p_value}};
  if (r.null_distribution.family != StatisticFamily::kNormal) {
    v["df1"] = r.null_distribution.df1;
  }
  if (r.null_distribution.family == StatisticFamily::kFisher) {
    v["df2"] = r.null_distribution.df2;
  }
  return v;
}

inline void add(std::map<std::string, double>& v,
                const std::map<std::string, double>& more) {
  for (const auto& [k, x] : more) v[k] = x;
}

// Summary values of sample `i` under names suffixed with `suffix`.
inline std::map<std::string, double> sample_values(
    const inference::SampleSummary& s, const std::string& suffix) {
  std::map<std::string, double> v{{"n" + suffix, s.n}};
  if (s.mean) v["mean" + suffix] = *s.mean;
  if (s.sd) v["sd" + suffix] = *s.sd;
  if (s.variance) v["var" + suffix] = *s.variance;
  if (s.successes) v["x" + suffix] = *s.successes;
  if (s.p_hat) v["phat" + suffix] = *s.p_hat;
  return v;
}

inline std::string sub(std::string_view symbol, const std::string& index) {
  if (index.empty()) return std::string(symbol);
  return std::string(symbol) + "_" + index;
}

inline Section data_section(const InferenceResult& r) {
  Section s{"Data", {}};
  const bool two = r.summaries.size() == 2;
  for (std::size_t i = 0; i < r.summaries.size(); ++i) {
    const std::string idx = two ? std::to_string(i + 1) : "";
    const auto v = sample_values(r.summaries[i], idx);
    std::string t;
    switch (inference::summary_kind(r.setting)) {
      case inference::SummaryKind::kMean:
        t = sub("n", idx) + " = {{n" + idx + "}}, \\quad " +
            sub("\\bar{x}", idx) + " = {{mean" + idx + "}}, \\quad " +
            sub("s", idx) + " = {{sd" + idx + "}}";
        break;
      case inference::SummaryKind::kProportion:
        t = sub("n", idx) + " = {{n" + idx + "}}, \\quad " + sub("x", idx) +
            " = {{x" + idx + "}}, \\quad " + sub("\\hat{p}", idx) +
            " = \\frac{" + sub("x", idx) + "}{" + sub("n", idx) +
            "} = \\frac{{{x" + idx + "}}}{{{n" + idx + "}}} = {{phat" + idx +
            "}}";
        break;
      case inference::SummaryKind::kVariance:
        t = sub("n", idx) + " = {{n" + idx + "}}, \\quad " + sub("s", idx) +
            "^2 = {{var" + idx + "}}";
        break;
    }
    s.steps.push_back(make_step(std::move(t), v));
  }
  if (r.difference_summary) {
    s.steps.push_back(make_step(
        "d_i = x_{1i} - x_{2i}: \\quad n = {{n}}, \\quad \\bar{d} = {{mean}}, "
        "\\quad s_d = {{sd}}",
        sample_values(*r.difference_summary, "")));
  }
  if (r.known_sigma) {
    if (r.setting == Setting::kTwoMeansIndependent) {
      s.steps.push_back(make_step(
          "\\sigma_1 = {{sigma1}}, \\quad \\sigma_2 = {{sigma2}} "
          "\\quad \\text{(known)}",
          {{"sigma1", *r.config.sigma}, {"sigma2", *r.config.sigma2}}));
    } else {
      s.steps.push_back(make_step("\\sigma = {{sigma}} \\quad \\text{(known)}",
                                  {{"sigma", *r.config.sigma}}));
    }
  }
  if (r.pooled_variance) {
    auto v = sample_values(r.summaries[0], "1");
    add(v, sample_values(r.summaries[1], "2"));
    v["sp2"] = *r.pooled_variance;
    s.steps.push_back(make_step(
        "s_p^2 = \\frac{(n_1 - 1)s_1^2 + (n_2 - 1)s_2^2}{n_1 + n_2 - 2} = "
        "\\frac{({{n1}} - 1) \\times {{var1}} + ({{n2}} - 1) \\times {{var2}}}"
        "{{{n1}} + {{n2}} - 2} = {{sp2}}",
        v));
  }
  if (r.pooled_proportion) {
    auto v = sample_values(r.summaries[0], "1");
    add(v, sample_values(r.summaries[1], "2"));
    v["pbar"] = *r.pooled_proportion;
    s.steps.push_back(make_step(
        "\\bar{p} = \\frac{x_1 + x_2}{n_1 + n_2} = "
        "\\frac{{{x1}} + {{x2}}}{{{n1}} + {{n2}}} = {{pbar}}",
        v));
  }
  return s;
}

// Estimator, its standard error and the substituted forms for the location
// settings.
struct LocationParts {
  std::string estimator;
  std::string estimator_values;
  std::string se;
  std::string se_values;
};

inline LocationParts location_parts(const InferenceResult& r, bool for_ci) {
  switch (r.setting) {
    case Setting::kOneMean:
    case Setting::kTwoMeansPaired: {
      const bool paired = r.setting == Setting::kTwoMeansPaired;
      const std::string mean = paired ? "\\bar{d}" : "\\bar{x}";
      if (r.known_sigma) {
        return {mean, "{{mean}}", "\\sigma/\\sqrt{n}",
                "{{sigma}}/\\sqrt{{{n}}}"};
      }
      return {mean, "{{mean}}", paired ? "s_d/\\sqrt{n}" : "s/\\sqrt{n}",
              "{{sd}}/\\sqrt{{{n}}}"};
    }
    case Setting::kTwoMeansIndependent: {
      const std::string est = "(\\bar{x}_1 - \\bar{x}_2)";
      const std::string est_v = "({{mean1}} - {{mean2}})";
      if (r.known_sigma) {
        return {est, est_v, "\\sqrt{\\sigma_1^2/n_1 + \\sigma_2^2/n_2}",
                "\\sqrt{{{sigma1}}^2/{{n1}} + {{sigma2}}^2/{{n2}}}"};
      }
      if (r.config.equal_variances) {
        return {est, est_v, "s_p \\sqrt{1/n_1 + 1/n_2}",
                "\\sqrt{{{sp2}}} \\times \\sqrt{1/{{n1}} + 1/{{n2}}}"};
      }
      return {est, est_v, "\\sqrt{s_1^2/n_1 + s_2^2/n_2}",
              "\\sqrt{{{var1}}/{{n1}} + {{var2}}/{{n2}}}"};
    }
    case Setting::kOneProportion:
      if (for_ci) {
        return {"\\hat{p}", "{{phat}}", "\\sqrt{\\hat{p}(1 - \\hat{p})/n}",
                "\\sqrt{{{phat}} \\times (1 - {{phat}})/{{n}}}"};
      }
      return {"\\hat{p}", "{{phat}}", "\\sqrt{p_0(1 - p_0)/n}",
              "\\sqrt{{{h0}} \\times (1 - {{h0}})/{{n}}}"};
    case Setting::kTwoProportions: {
      const std::string est = "(\\hat{p}_1 - \\hat{p}_2)";
      const std::string est_v = "({{phat1}} - {{phat2}})";
      if (r.pooled_proportion && !for_ci) {
        return {est, est_v, "\\sqrt{\\bar{p}(1 - \\bar{p})(1/n_1 + 1/n_2)}",
                "\\sqrt{{{pbar}} \\times (1 - {{pbar}}) \\times "
                "(1/{{n1}} + 1/{{n2}})}"};
      }
      return {est, est_v,
              "\\sqrt{\\hat{p}_1(1 - \\hat{p}_1)/n_1 + "
              "\\hat{p}_2(1 - \\hat{p}_2)/n_2}",
              "\\sqrt{{{phat1}} \\times (1 - {{phat1}})/{{n1}} + "
              "{{phat2}} \\times (1 - {{phat2}})/{{n2}}}"};
    }
    default: return {};
  }
}

// Values referenced by the templates of location_parts and the test steps.
inline std::map<std::string, double> all_values(const InferenceResult& r) {
  auto v = base_values(r);
  const bool two = r.summaries.size() == 2;
  if (r.difference_summary) {
    add(v, sample_values(*r.difference_summary, ""));
  } else {
    for (std::size_t i = 0; i < r.summaries.size(); ++i) {
      add(v, sample_values(r.summaries[i], two ? std::to_string(i + 1) : ""));
    }
  }
  if (r.known_sigma) {
    if (r.setting == Setting::kTwoMeansIndependent) {
      v["sigma1"] = *r.config.sigma;
      v["sigma2"] = *r.config.sigma2;
    } else {
      v["sigma"] = *r.config.sigma;
    }
  }
  if (r.pooled_variance) v["sp2"] = *r.pooled_variance;
  if (r.pooled_proportion) v["pbar"] = *r.pooled_proportion;
  return v;
}

// Keeps only the entries a template refers to.
inline Step step_with(std::string tmpl, const std::map<std::string, double>& v,
                      StepKind kind = StepKind::kMath) {
  std::map<std::string, double> used;
  for (const auto& name : placeholders(tmpl)) {
    const auto it = v.find(name);
    if (it != v.end()) used[name] = it->second;
  }
  return make_step(std::move(tmpl), std::move(used), kind);
}

inline std::string alpha_part(Alternative a, bool lower_tail_prob,
                              bool upper) {
  // Upper-tail subscripts (z, t): α/2 or α. Lower-tail probabilities
  // (χ², F): α/2 and 1 − α/2, or α and 1 − α.
  if (!lower_tail_prob) {
    return a == Alternative::kTwoSided ? "\\alpha/2" : "\\alpha";
  }
  if (a == Alternative::kTwoSided) return upper ? "1-\\alpha/2" : "\\alpha/2";
  return upper ? "1-\\alpha" : "\\alpha";
}

inline std::string alpha_value(Alternative a, bool lower_tail_prob,
                               bool upper) {
  if (!lower_tail_prob) {
    return a == Alternative::kTwoSided ? "{{a2}}" : "{{alpha}}";
  }
  if (a == Alternative::kTwoSided) return upper ? "{{ua2}}" : "{{a2}}";
  return upper ? "{{ua}}" : "{{alpha}}";
}

inline void add_alpha_values(std::map<std::string, double>& v, double alpha) {
  v["a2"] = alpha / 2;
  v["ua2"] = 1.0 - alpha / 2;
  v["ua"] = 1.0 - alpha;
}

inline Section ci_section(const InferenceResult& r) {
  Section s{"Confidence interval", {}};
  auto v = all_values(r);
  add_alpha_values(v, r.config.alpha);
  v["level"] = r.ci.level;
  v["lower"] = r.ci.lower;
  v["upper"] = r.ci.upper;
  const auto alt = r.config.alternative;
  const auto fam = r.null_distribution.family;
  const std::string letter = quantile_letter(fam);
  const std::string dfs = df_symbol(r);
  const std::string dfv = df_values(r);

  if (r.setting == Setting::kTwoMeansIndependent &&
      fam == StatisticFamily::kStudentT && !r.config.equal_variances) {
    s.steps.push_back(step_with(
        "\\nu = \\frac{(s_1^2/n_1 + s_2^2/n_2)^2}{\\frac{(s_1^2/n_1)^2}"
        "{n_1 - 1} + \\frac{(s_2^2/n_2)^2}{n_2 - 1}} = {{df1}}",
        v));
  }

  std::string level_line = "1 - \\alpha = {{level}}";
  std::string t;
  if (r.setting == Setting::kOneVariance ||
      r.setting == Setting::kTwoVariances) {
    const bool var1 = r.setting == Setting::kOneVariance;
    v["q_lo"] = r.ci_quantiles.front();
    v["q_hi"] = r.ci_quantiles.back();
    const std::string num = var1 ? "(n - 1)s^2" : "s_1^2 / s_2^2";
    const std::string num_v =
        var1 ? "({{n}} - 1) \\times {{var}}" : "{{var1}} / {{var2}}";
    auto q = [&](bool upper) {
      return letter + "_{" + alpha_part(alt, true, upper) + dfs + "}";
    };
    auto frac = [&](const std::string& a, const std::string& b) {
      return "\\frac{" + a + "}{" + b + "}";
    };
    switch (alt) {
      case Alternative::kTwoSided:
        t = "\\left[" + frac(num, q(true)) + "; " + frac(num, q(false)) +
            "\\right] = \\left[" + frac(num_v, "{{q_hi}}") + "; " +
            frac(num_v, "{{q_lo}}") + "\\right] = [{{lower}}; {{upper}}]";
        break;
      case Alternative::kGreater:
        t = "\\left[" + frac(num, q(true)) + "; +\\infty\\right) = \\left[" +
            frac(num_v, "{{q_hi}}") + "; +\\infty\\right) = "
            "[{{lower}}; +\\infty)";
        break;
      case Alternative::kLess:
        t = "\\left[0; " + frac(num, q(false)) + "\\right] = \\left[0; " +
            frac(num_v, "{{q_lo}}") + "\\right] = [0; {{upper}}]";
        break;
    }
  } else {
    v["q"] = r.ci_quantiles.front();
    const auto parts = location_parts(r, true);
    const std::string q =
        letter + "_{" + alpha_part(alt, false, false) + dfs + "}";
    switch (alt) {
      case Alternative::kTwoSided:
        t = parts.estimator + " \\pm (" + q + " \\times " + parts.se +
            ") = " + parts.estimator_values + " \\pm ({{q}} \\times " +
            parts.se_values + ") = [{{lower}}; {{upper}}]";
        break;
      case Alternative::kGreater:
        t = "\\left[" + parts.estimator + " - " + q + " \\times " + parts.se +
            "; +\\infty\\right) = \\left[" + parts.estimator_values +
            " - {{q}} \\times " + parts.se_values +
            "; +\\infty\\right) = [{{lower}}; +\\infty)";
        break;
      case Alternative::kLess:
        t = "\\left(-\\infty; " + parts.estimator + " + " + q + " \\times " +
            parts.se + "\\right] = \\left(-\\infty; " +
            parts.estimator_values + " + {{q}} \\times " + parts.se_values +
            "\\right] = (-\\infty; {{upper}}]";
        break;
    }
  }
  s.steps.push_back(step_with(level_line, v));
  s.steps.push_back(step_with(std::move(t), v));
  return s;
}

inline Step statistic_step(const InferenceResult& r,
                           const std::map<std::string, double>& v) {
  const std::string obs(observed_symbol(r.null_distribution.family));
  std::string t;
  switch (r.setting) {
    case Setting::kOneVariance:
      t = obs + " = \\frac{(n - 1)s^2}{\\sigma_0^2} = "
                "\\frac{({{n}} - 1) \\times {{var}}}{{{h0}}} = {{stat}}";
      break;
    case Setting::kTwoVariances:
      if (r.h0 == 1.0) {
        t = obs + " = \\frac{s_1^2}{s_2^2} = \\frac{{{var1}}}{{{var2}}} = "
                  "{{stat}}";
      } else {
        t = obs + " = \\frac{s_1^2 / s_2^2}{\\rho_0} = "
                  "\\frac{{{var1}} / {{var2}}}{{{h0}}} = {{stat}}";
      }
      break;
    default: {
      const auto parts = location_parts(r, false);
      const std::string null_sym =
          r.setting == Setting::kOneMean
              ? "\\mu_0"
              : (r.setting == Setting::kOneProportion ? "p_0" : "\\Delta_0");
      t = obs + " = \\frac{" + parts.estimator + " - " + null_sym + "}{" +
          parts.se + "} = \\frac{" + parts.estimator_values + " - {{h0}}}{" +
          parts.se_values + "} = {{stat}}";
      break;
    }
  }
  return step_with(std::move(t), v);
}

inline Step critical_step(const InferenceResult& r,
                          std::map<std::string, double> v) {
  const auto alt = r.config.alternative;
  const auto fam = r.null_distribution.family;
  const std::string letter = quantile_letter(fam);
  const std::string obs(observed_symbol(fam));
  const std::string dfs = df_symbol(r);
  const std::string dfv = df_values(r);
  add_alpha_values(v, r.config.alpha);
  std::string t;
  if (r.null_distribution.symmetric()) {
    const std::string q_sym =
        letter + "_{" + alpha_part(alt, false, false) + dfs + "}";
    const std::string q_val =
        letter + "_{" + alpha_value(alt, false, false) + dfv + "}";
    switch (alt) {
      case Alternative::kTwoSided:
        v["c"] = r.critical_values[1];
        t = "\\pm " + q_sym + " = \\pm " + q_val + " = \\pm {{c}}, \\quad "
            "\\text{reject } H_0 \\text{ if } |" + obs + "| \\geq {{c}}";
        break;
      case Alternative::kGreater:
        v["c"] = r.critical_values[0];
        t = q_sym + " = " + q_val + " = {{c}}, \\quad "
            "\\text{reject } H_0 \\text{ if } " + obs + " \\geq {{c}}";
        break;
      case Alternative::kLess:
        v["c"] = r.critical_values[0];
        t = "-" + q_sym + " = -" + q_val + " = {{c}}, \\quad "
            "\\text{reject } H_0 \\text{ if } " + obs + " \\leq {{c}}";
        break;
    }
  } else {
    auto q = [&](bool upper) {
      return letter + "_{" + alpha_part(alt, true, upper) + dfs + "} = " +
             letter + "_{" + alpha_value(alt, true, upper) + dfv + "}";
    };
    switch (alt) {
      case Alternative::kTwoSided:
        v["c_lo"] = r.critical_values[0];
        v["c_hi"] = r.critical_values[1];
        t = q(false) + " = {{c_lo}}, \\quad " + q(true) +
            " = {{c_hi}}, \\quad \\text{reject } H_0 \\text{ if } " + obs +
            " \\leq {{c_lo}} \\text{ or } " + obs + " \\geq {{c_hi}}";
        break;
      case Alternative::kGreater:
        v["c"] = r.critical_values[0];
        t = q(true) + " = {{c}}, \\quad \\text{reject } H_0 \\text{ if } " +
            obs + " \\geq {{c}}";
        break;
      case Alternative::kLess:
        v["c"] = r.critical_values[0];
        t = q(false) + " = {{c}}, \\quad \\text{reject } H_0 \\text{ if } " +
            obs + " \\leq {{c}}";
        break;
    }
  }
  return step_with(std::move(t), v);
}

inline Step conclusion_step(const InferenceResult& r,
                            const std::map<std::string, double>& v) {
  const auto fam = r.null_distribution.family;
  const std::string obs(observed_symbol(fam));
  const std::string rv(variable_symbol(fam));
  std::string t = "p\\text{-value} = ";
  switch (r.config.alternative) {
    case Alternative::kTwoSided:
      if (r.null_distribution.symmetric()) {
        t += "2P(" + rv + " \\geq |" + obs + "|)";
      } else {
        t += "2\\min\\{P(" + rv + " \\leq " + obs + "), P(" + rv + " \\geq " +
             obs + ")\\}";
      }
      break;
    case Alternative::kGreater: t += "P(" + rv + " \\geq " + obs + ")"; break;
    case Alternative::kLess: t += "P(" + rv + " \\leq " + obs + ")"; break;
  }
  t += " {{p:p}}";
  if (r.decision == inference::Decision::kReject) {
    t += ", \\quad p < \\alpha = {{alpha}} \\Rightarrow \\text{reject } H_0";
  } else {
    t += ", \\quad p \\geq \\alpha = {{alpha}} \\Rightarrow "
         "\\text{do not reject } H_0";
  }
  return step_with(std::move(t), v);
}

inline Section test_section(const InferenceResult& r) {
  Section s{"Hypothesis test", {}};
  const auto v = all_values(r);
  const std::string param(parameter_symbol(r.setting));
  s.steps.push_back(step_with(
      "H_0: " + param + " = {{h0}} \\quad \\text{versus} \\quad H_1: " +
          param + " " +
          std::string(alternative_relation(r.config.alternative)) + " {{h0}}",
      v));
  s.steps.push_back(statistic_step(r, v));
  s.steps.push_back(critical_step(r, v));
  s.steps.push_back(conclusion_step(r, v));
  return s;
}

}  // namespace detail

/// Sections "Data", "Confidence interval", "Hypothesis test" (four steps:
/// hypotheses, statistic, critical values, conclusion) and "Interpretation".
inline DerivationDocument test_document(
    const inference::InferenceResult& result) {
  Section interpretation{"Interpretation", {}};
  interpretation.steps.push_back(
      inference::interpretation_step(result, result.config.alpha));
  if (result.approximation_warning) {
    interpretation.steps.push_back(text_step(
        "The normal approximation may be unreliable here: a sample has fewer "
        "than 5 observed successes or failures."));
  }
  return {std::string(inference::setting_tag(result.setting)),
          {detail::data_section(result), detail::ci_section(result),
           detail::test_section(result), std::move(interpretation)}};
}

// --- Plain text ------------------------------------------------------------

namespace detail {

inline std::size_t skip_spaces(std::string_view s, std::size_t i) {
  while (i < s.size() && s[i] == ' ') ++i;
  return i;
}

// Reads a {...} group or a single character starting at `i`.
inline std::string_view read_group(std::string_view s, std::size_t& i) {
  i = skip_spaces(s, i);
  if (i >= s.size()) return {};
  if (s[i] != '{') {
    if (s[i] == '\\') {
      std::size_t j = i + 1;
      while (j < s.size() && std::isalpha(static_cast<unsigned char>(s[j]))) {
        ++j;
      }
      if (j == i + 1 && j < s.size()) ++j;
      const auto g = s.substr(i, j - i);
      i = j;
      return g;
    }
    return s.substr(i++, 1);
  }
  int depth = 0;
  const std::size_t start = i + 1;
  for (; i < s.size(); ++i) {
    if (s[i] == '{') ++depth;
    if (s[i] == '}' && --depth == 0) break;
  }
  const auto g = s.substr(start, i - start);
  if (i < s.size()) ++i;
  return g;
}

inline bool is_atomic(const std::string& s) {
  return s.find_first_of(" +-*/=,") == std::string::npos;
}

inline std::string wrap(const std::string& s) {
  return is_atomic(s) ? s : "(" + s + ")";
}

}  // namespace detail

/// Plain UTF-8 rendering of the TeX subset used in documents.
inline std::string tex_to_text(std::string_view s) {
  static const std::map<std::string_view, std::string_view> kSymbols = {
      {"alpha", "α"}, {"beta", "β"}, {"gamma", "γ"}, {"Gamma", "Γ"},
      {"lambda", "λ"}, {"mu", "μ"}, {"nu", "ν"}, {"pi", "π"},
      {"rho", "ρ"}, {"sigma", "σ"}, {"chi", "χ"}, {"Delta", "Δ"},
      {"pm", "±"}, {"mp", "∓"}, {"times", "×"}, {"cdot", "·"},
      {"leq", "≤"}, {"geq", "≥"}, {"neq", "≠"}, {"infty", "∞"},
      {"sim", "~"}, {"Rightarrow", "⇒"}, {"ldots", "..."}, {"in", "∈"},
      {"quad", "\t"}, {"min", "min"}, {"ln", "ln"}, {"sum", "Σ"},
      {"left", ""}, {"right", ""}, {",", " "}, {"{", "{"}, {"}", "}"},
  };
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (c == '\\') {
      std::size_t j = i + 1;
      while (j < s.size() && std::isalpha(static_cast<unsigned char>(s[j]))) {
        ++j;
      }
      if (j == i + 1 && j < s.size()) ++j;
      const std::string_view cmd = s.substr(i + 1, j - i - 1);
      i = j;
      if (cmd == "frac") {
        const std::string num = tex_to_text(detail::read_group(s, i));
        const std::string den = tex_to_text(detail::read_group(s, i));
        out += detail::wrap(num) + "/" + detail::wrap(den);
      } else if (cmd == "sqrt") {
        out += "sqrt(" + tex_to_text(detail::read_group(s, i)) + ")";
      } else if (cmd == "binom") {
        const std::string n = tex_to_text(detail::read_group(s, i));
        const std::string k = tex_to_text(detail::read_group(s, i));
        out += "C(" + n + ", " + k + ")";
      } else if (cmd == "bar" || cmd == "hat") {
        out += tex_to_text(detail::read_group(s, i));
        out += cmd == "bar" ? "\u0304" : "\u0302";
      } else if (cmd == "text" || cmd == "mathcal") {
        out += detail::read_group(s, i);
      } else if (const auto it = kSymbols.find(cmd); it != kSymbols.end()) {
        // \left( and \right] keep only the delimiter.
        out += it->second;
      } else {
        out += cmd;
      }
    } else if (c == '{' || c == '}') {
      ++i;
    } else if (c == '_' || c == '^') {
      ++i;
      const std::string g = tex_to_text(detail::read_group(s, i));
      out += c;
      out += g.size() > 1 && !detail::is_atomic(g) ? "(" + g + ")" : g;
    } else {
      out += c;
      ++i;
    }
  }
  return out;
}

/// tex_to_text followed by whitespace cleanup: runs of spaces collapse to
/// one and each \quad becomes a three-space gap.
inline std::string tex_to_plain(std::string_view s) {
  const std::string raw = tex_to_text(s);
  std::string out;
  for (char c : raw) {
    if (c == '\t') {
      while (!out.empty() && out.back() == ' ') out.pop_back();
      out += "   ";
    } else if (c == ' ' && !out.empty() && out.back() == ' ') {
      continue;
    } else {
      out += c;
    }
  }
  return out;
}

// --- Regression report -----------------------------------------------------

struct ReportRequest {
  regression::RegressionInput input;
  bool include_steps = true;
  /// Request document embedded verbatim for replay; generated from `input`
  /// when empty.
  std::string replay_payload;
};

namespace detail {

inline std::string html_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Shortest decimal that reads back to the same double.
inline std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string json_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

inline std::string json_numbers(const std::vector<double>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += shortest(xs[i]);
  }
  return out + "]";
}

inline std::string default_replay(const ReportRequest& req) {
  const auto& in = req.input;
  return "{\"x\":" + json_numbers(in.x) + ",\"y\":" + json_numbers(in.y) +
         ",\"x_label\":" + json_string(in.x_label) +
         ",\"y_label\":" + json_string(in.y_label) +
         ",\"confidence_level\":" + shortest(in.confidence_level) +
         ",\"include_band\":" + (in.include_band ? "true" : "false") +
         ",\"include_steps\":" + (req.include_steps ? "true" : "false") + "}";
}

// JSON inside <script> must not contain markup characters; the \u escapes
// decode to the same document.
inline std::string script_safe_json(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "\\u003c"; break;
      case '>': out += "\\u003e"; break;
      case '&': out += "\\u0026"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string fmt2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

struct Svg {
  static constexpr double kWidth = 480;
  static constexpr double kHeight = 320;
  static constexpr double kLeft = 56;
  static constexpr double kRight = 16;
  static constexpr double kTop = 28;
  static constexpr double kBottom = 44;

  double x_lo, x_hi, y_lo, y_hi;
  std::string body;

  Svg(std::vector<double> xs, std::vector<double> ys) {
    auto [xl, xh] = std::minmax_element(xs.begin(), xs.end());
    auto [yl, yh] = std::minmax_element(ys.begin(), ys.end());
    x_lo = *xl;
    x_hi = *xh;
    y_lo = *yl;
    y_hi = *yh;
    pad(x_lo, x_hi);
    pad(y_lo, y_hi);
  }

  static void pad(double& lo, double& hi) {
    if (hi <= lo) {
      const double d = lo == 0 ? 1.0 : std::fabs(lo) * 0.1;
      lo -= d;
      hi += d;
    }
    const double m = (hi - lo) * 0.05;
    lo -= m;
    hi += m;
  }

  double px(double x) const {
    return kLeft + (x - x_lo) / (x_hi - x_lo) * (kWidth - kLeft - kRight);
  }
  double py(double y) const {
    return kHeight - kBottom -
           (y - y_lo) / (y_hi - y_lo) * (kHeight - kTop - kBottom);
  }

  void point(double x, double y) {
    body += "<circle cx=\"" + fmt2(px(x)) + "\" cy=\"" + fmt2(py(y)) +
            "\" r=\"3\" fill=\"#1f77b4\"/>";
  }
  void polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                std::string_view stroke, std::string_view dash = "") {
    body += "<polyline fill=\"none\" stroke=\"" + std::string(stroke) +
            "\" stroke-width=\"1.5\"";
    if (!dash.empty()) body += " stroke-dasharray=\"" + std::string(dash) + "\"";
    body += " points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) body += ' ';
      body += fmt2(px(xs[i])) + "," + fmt2(py(ys[i]));
    }
    body += "\"/>";
  }
  void band(const std::vector<double>& xs, const std::vector<double>& lo,
            const std::vector<double>& hi) {
    body += "<polygon fill=\"#1f77b4\" fill-opacity=\"0.15\" stroke=\"none\" "
            "points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      body += fmt2(px(xs[i])) + "," + fmt2(py(hi[i])) + " ";
    }
    for (std::size_t i = xs.size(); i-- > 0;) {
      body += fmt2(px(xs[i])) + "," + fmt2(py(lo[i]));
      if (i) body += ' ';
    }
    body += "\"/>";
  }
  void hline(double y) {
    if (y < y_lo || y > y_hi) return;
    body += "<line x1=\"" + fmt2(kLeft) + "\" y1=\"" + fmt2(py(y)) +
            "\" x2=\"" + fmt2(kWidth - kRight) + "\" y2=\"" + fmt2(py(y)) +
            "\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>";
  }

  std::string render(std::string_view title, std::string_view x_label,
                     std::string_view y_label) const {
    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    fmt2(kWidth) + "\" height=\"" + fmt2(kHeight) +
                    "\" viewBox=\"0 0 " + fmt2(kWidth) + " " + fmt2(kHeight) +
                    "\" role=\"img\">";
    s += "<title>" + html_escape(title) + "</title>";
    s += "<rect x=\"" + fmt2(kLeft) + "\" y=\"" + fmt2(kTop) + "\" width=\"" +
         fmt2(kWidth - kLeft - kRight) + "\" height=\"" +
         fmt2(kHeight - kTop - kBottom) +
         "\" fill=\"none\" stroke=\"#333\"/>";
    for (int i = 0; i <= 4; ++i) {
      const double xv = x_lo + (x_hi - x_lo) * i / 4;
      const double yv = y_lo + (y_hi - y_lo) * i / 4;
      s += "<text x=\"" + fmt2(px(xv)) + "\" y=\"" +
           fmt2(kHeight - kBottom + 16) +
           "\" font-size=\"10\" text-anchor=\"middle\">" +
           format_compact(xv) + "</text>";
      s += "<text x=\"" + fmt2(kLeft - 4) + "\" y=\"" + fmt2(py(yv) + 3) +
           "\" font-size=\"10\" text-anchor=\"end\">" + format_compact(yv) +
           "</text>";
    }
    s += "<text x=\"" + fmt2(kWidth / 2) +
         "\" y=\"16\" font-size=\"12\" text-anchor=\"middle\">" +
         html_escape(title) + "</text>";
    s += "<text x=\"" + fmt2((kLeft + kWidth - kRight) / 2) + "\" y=\"" +
         fmt2(kHeight - 8) + "\" font-size=\"11\" text-anchor=\"middle\">" +
         html_escape(x_label) + "</text>";
    s += "<text x=\"14\" y=\"" + fmt2((kTop + kHeight - kBottom) / 2) +
         "\" font-size=\"11\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
         fmt2((kTop + kHeight - kBottom) / 2) + ")\">" + html_escape(y_label) +
         "</text>";
    s += body;
    s += "</svg>";
    return s;
  }
};

inline std::string td(const std::string& s) { return "<td>" + s + "</td>"; }
inline std::string th(const std::string& s) { return "<th>" + s + "</th>"; }

inline std::string optional_cell(const std::optional<double>& v,
                                 bool p_value = false) {
  if (!v) return td("NA");
  return td(html_escape(p_value ? format_p_value(*v) : format_fixed4(*v)));
}

inline double sample_sd(const std::vector<double>& xs, double mean) {
  specfun::CompensatedSum s;
  for (double x : xs) s.add((x - mean) * (x - mean));
  return std::sqrt(s.value() / static_cast<double>(xs.size() - 1));
}

inline std::string math_block(const Step& s) {
  if (s.kind == StepKind::kText) return "<p>" + html_escape(s.display) + "</p>";
  return "<p class=\"math\">\\[" + html_escape(s.display) + "\\]</p>";
}

}  // namespace detail

/// One self-contained HTML page (also well-formed XML) describing the fit.
/// Math is typeset in the browser from the embedded TeX; every chart is
/// inline SVG.
inline std::string regression_report(const ReportRequest& req) {
  using detail::html_escape;
  const auto& in = req.input;
  const auto fit = regression::fit(in);
  const std::string xl = html_escape(in.x_label);
  const std::string yl = html_escape(in.y_label);

  std::string h;
  h += "<!DOCTYPE html>\n<html xmlns=\"http://www.w3.org/1999/xhtml\" "
       "lang=\"en\">\n<head>\n<meta charset=\"utf-8\"/>\n"
       "<title>Simple linear regression report</title>\n"
       "<style>body{font-family:sans-serif;max-width:960px;margin:2em auto;}"
       "table{border-collapse:collapse;}td,th{border:1px solid #ccc;"
       "padding:2px 8px;text-align:right;}svg{margin:4px;}</style>\n"
       "<script>window.MathJax={tex:{inlineMath:[['\\\\(','\\\\)']]}};"
       "</script>\n"
       "<script id=\"MathJax-script\" async=\"async\" "
       "src=\"https://cdn.jsdelivr.net/npm/mathjax@3/es5/tex-chtml.js\">"
       "</script>\n</head>\n<body>\n";
  h += "<h1>Simple linear regression: " + yl + " on " + xl + "</h1>\n";

  h += "<h2>Data</h2>\n<table id=\"data\">\n<thead><tr>" + detail::th("i") +
       detail::th(xl) + detail::th(yl) + "</tr></thead>\n<tbody>\n";
  for (std::size_t i = 0; i < in.x.size(); ++i) {
    h += "<tr>" + detail::td(std::to_string(i + 1)) +
         detail::td(detail::shortest(in.x[i])) +
         detail::td(detail::shortest(in.y[i])) + "</tr>\n";
  }
  h += "</tbody>\n</table>\n";

  h += "<h2>Summary statistics</h2>\n<table id=\"summary\">\n<thead><tr>" +
       detail::th("") + detail::th("n") + detail::th("Mean") +
       detail::th("SD") + "</tr></thead>\n<tbody>\n";
  h += "<tr>" + detail::td(xl) + detail::td(format_compact(fit.n)) +
       detail::td(format_fixed4(fit.x_mean)) +
       detail::td(format_fixed4(detail::sample_sd(in.x, fit.x_mean))) +
       "</tr>\n";
  h += "<tr>" + detail::td(yl) + detail::td(format_compact(fit.n)) +
       detail::td(format_fixed4(fit.y_mean)) +
       detail::td(format_fixed4(detail::sample_sd(in.y, fit.y_mean))) +
       "</tr>\n";
  h += "</tbody>\n</table>\n";

  if (req.include_steps) {
    h += "<h2 id=\"derivation\">Step-by-step derivation</h2>\n";
    for (const auto& section : regression::derivation(in, fit).sections) {
      for (const auto& step : section.steps) {
        h += detail::math_block(step) + "\n";
      }
    }
  }

  const auto table = regression::summary_table(fit);
  h += "<h2>Coefficients</h2>\n<table id=\"coefficients\">\n<thead><tr>" +
       detail::th("Term") + detail::th("Estimate") +
       detail::th("Std. Error") + detail::th("t value") +
       detail::th("p-value") + "</tr></thead>\n<tbody>\n";
  for (const auto& row : table.rows) {
    h += "<tr>" + detail::td(row.term == "x" ? xl : row.term) +
         detail::td(format_fixed4(row.estimate)) +
         (table.degenerate ? detail::td("NA")
                           : detail::td(format_fixed4(row.std_error))) +
         detail::optional_cell(row.t_value) +
         detail::optional_cell(row.p_value, true) + "</tr>\n";
  }
  h += "</tbody>\n</table>\n";
  h += "<p>Residual standard error: " + format_fixed4(table.sigma_hat) +
       " on " + format_compact(table.df_resid) +
       " degrees of freedom. R\u00b2 = " + format_fixed4(table.r_squared) +
       ", adjusted R\u00b2 = " + format_fixed4(table.adj_r_squared) +
       ".</p>\n";

  h += "<h2>Interpretation</h2>\n";
  for (const auto& s :
       regression::interpretation_steps(fit, in.x_label, in.y_label)) {
    h += "<p>" + html_escape(s.display) + "</p>\n";
  }

  h += "<h2>Fitted line</h2>\n";
  {
    std::vector<double> ys = in.y;
    std::optional<regression::ConfidenceBand> band;
    if (in.include_band && !fit.degenerate) {
      band = regression::confidence_band(in, fit);
      ys.insert(ys.end(), band->lower.begin(), band->lower.end());
      ys.insert(ys.end(), band->upper.begin(), band->upper.end());
    }
    detail::Svg svg(in.x, ys);
    if (band) svg.band(band->grid, band->lower, band->upper);
    for (std::size_t i = 0; i < in.x.size(); ++i) svg.point(in.x[i], in.y[i]);
    const auto [lo, hi] = std::minmax_element(in.x.begin(), in.x.end());
    svg.polyline({*lo, *hi},
                 {fit.beta0 + fit.beta1 * *lo, fit.beta0 + fit.beta1 * *hi},
                 "#d62728");
    h += svg.render("Scatter plot with fitted line", in.x_label, in.y_label) +
         "\n";
  }

  h += "<h2>Diagnostics</h2>\n";
  if (fit.degenerate) {
    h += "<p>The data lie exactly on a line; residual diagnostics are not "
         "defined.</p>\n";
  } else {
    const auto d = regression::diagnostics(in, fit);
    auto scatter = [&](const std::vector<regression::Point>& pts,
                       std::string_view title, std::string_view xlab,
                       std::string_view ylab, bool zero_line,
                       bool diagonal) {
      std::vector<double> xs, ys;
      for (const auto& p : pts) {
        xs.push_back(p.x);
        ys.push_back(p.y);
      }
      if (xs.empty()) return std::string();
      detail::Svg svg(xs, ys);
      if (zero_line) svg.hline(0.0);
      if (diagonal) {
        const double a = std::max(svg.x_lo, svg.y_lo);
        const double b = std::min(svg.x_hi, svg.y_hi);
        if (a < b) svg.polyline({a, b}, {a, b}, "#888", "4 3");
      }
      for (const auto& p : pts) svg.point(p.x, p.y);
      return svg.render(title, xlab, ylab) + "\n";
    };
    h += scatter(d.residuals_vs_fitted, "Residuals vs fitted", "Fitted values",
                 "Residuals", true, false);
    h += scatter(d.qq_points, "Normal Q-Q", "Theoretical quantiles",
                 "Standardized residuals", false, true);
    h += scatter(d.scale_location, "Scale-location", "Fitted values",
                 "\u221a|Standardized residuals|", false, false);
    std::vector<regression::Point> lev;
    for (std::size_t i = 0; i < d.leverage.size(); ++i) {
      if (d.standardized_residuals[i]) {
        lev.push_back({d.leverage[i], *d.standardized_residuals[i]});
      }
    }
    h += scatter(lev, "Residuals vs leverage", "Leverage",
                 "Standardized residuals", true, false);
    h += "<table id=\"influence\">\n<thead><tr>" + detail::th("i") +
         detail::th("Leverage") + detail::th("Standardized residual") +
         detail::th("Cook's distance") + "</tr></thead>\n<tbody>\n";
    for (std::size_t i = 0; i < d.leverage.size(); ++i) {
      h += "<tr>" + detail::td(std::to_string(i + 1)) +
           detail::td(format_fixed4(d.leverage[i])) +
           detail::optional_cell(d.standardized_residuals[i]) +
           detail::optional_cell(d.cooks_distance[i]) + "</tr>\n";
    }
    h += "</tbody>\n</table>\n";
  }

  const std::string replay = req.replay_payload.empty()
                                 ? detail::default_replay(req)
                                 : req.replay_payload;
  h += "<h2>Replay</h2>\n<p>The request that produced this report:</p>\n"
       "<script type=\"application/json\" id=\"replay-payload\">" +
       detail::script_safe_json(replay) + "</script>\n";
  h += "</body>\n</html>\n";
  return h;
}

}  // namespace statlab::narrative
