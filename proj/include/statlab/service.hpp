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

// JSON/HTTP surface of the engine: the numeric-list grammar shared with the
// CLI, strict request parsing, response serialization and a transport-free
// request router. The HTTP server in tools/ only forwards to handle().

#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "statlab/derivation.hpp"
#include "statlab/display.hpp"
#include "statlab/distributions.hpp"
#include "statlab/error.hpp"
#include "statlab/inference.hpp"
#include "statlab/narrative.hpp"
#include "statlab/probability.hpp"
#include "statlab/regression.hpp"

namespace statlab::service {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr std::string_view kApiPrefix = "/api/v1";

struct Limits {
  std::size_t max_body_bytes = 8u << 20;
  std::size_t max_observations = 100000;
};

/// Reads STATLAB_MAX_BODY (bytes); other fields keep their defaults.
inline Limits limits_from_env() {
  Limits l;
  if (const char* v = std::getenv("STATLAB_MAX_BODY")) {
    char* end = nullptr;
    const unsigned long long n = std::strtoull(v, &end, 10);
    if (end != v && *end == '\0' && n > 0) l.max_body_bytes = n;
  }
  return l;
}

// --- Numeric lists ---------------------------------------------------------

/// Numbers separated by commas, semicolons or newlines. Whitespace around
/// items is ignored; empty items and anything that is not a finite decimal
/// number are rejected with the 1-based item index in the message.
inline std::vector<double> parse_numeric_list(std::string_view text,
                                              const std::string& field = "data") {
  std::vector<double> out;
  std::size_t item = 0;
  std::size_t pos = 0;
  while (true) {
    ++item;
    std::size_t end = text.find_first_of(",;\n", pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view tok = text.substr(pos, end - pos);
    while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.front()))) {
      tok.remove_prefix(1);
    }
    while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back()))) {
      tok.remove_suffix(1);
    }
    const std::string where = "item " + std::to_string(item);
    if (tok.empty()) {
      fail(ErrorCode::kParseError, where + " is empty", field);
    }
    std::string_view digits = tok;
    if (digits.front() == '+') digits.remove_prefix(1);
    double v = 0;
    const auto res =
        std::from_chars(digits.data(), digits.data() + digits.size(), v,
                        std::chars_format::general);
    // from_chars also reads "inf" and "nan"; neither is a data value.
    if (digits.empty() || digits.front() == '+' || res.ec != std::errc() ||
        res.ptr != digits.data() + digits.size() || !std::isfinite(v)) {
      fail(ErrorCode::kParseError,
           where + " is not a number: '" + std::string(tok) + "'", field);
    }
    out.push_back(v);
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

// --- Request parsing -------------------------------------------------------

namespace detail {

inline std::string join(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

inline void require_object(const Json& j, const std::string& field) {
  if (!j.is_object()) {
    fail(ErrorCode::kSchemaViolation,
         (field.empty() ? std::string("request") : field) +
             " must be a JSON object",
         field);
  }
}

inline void only_keys(const Json& j, const std::string& base,
                      std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || a == key;
    if (!ok) {
      fail(ErrorCode::kSchemaViolation, "unknown field '" + key + "'",
           join(base, key));
    }
  }
}

inline double as_number(const Json& v, const std::string& field) {
  if (!v.is_number()) {
    fail(ErrorCode::kSchemaViolation, field + " must be a number", field);
  }
  const double d = v.get<double>();
  if (!std::isfinite(d)) {
    fail(ErrorCode::kNonFiniteValue, field + " must be finite", field);
  }
  return d;
}

inline std::optional<double> number_opt(const Json& j, const std::string& key,
                                        const std::string& base) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return as_number(*it, join(base, key));
}

inline double number(const Json& j, const std::string& key,
                     const std::string& base) {
  const auto v = number_opt(j, key, base);
  if (!v) {
    fail(ErrorCode::kSchemaViolation, "missing field '" + key + "'",
         join(base, key));
  }
  return *v;
}

inline std::optional<std::string> string_opt(const Json& j,
                                             const std::string& key,
                                             const std::string& base) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    fail(ErrorCode::kSchemaViolation, key + " must be a string",
         join(base, key));
  }
  return it->get<std::string>();
}

inline bool boolean(const Json& j, const std::string& key,
                    const std::string& base, bool fallback) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  if (!it->is_boolean()) {
    fail(ErrorCode::kSchemaViolation, key + " must be true or false",
         join(base, key));
  }
  return it->get<bool>();
}

/// An array of numbers or a string in the numeric-list grammar.
inline std::vector<double> numbers(const Json& v, const std::string& field,
                                   const Limits& limits) {
  std::vector<double> out;
  if (v.is_string()) {
    out = parse_numeric_list(v.get_ref<const std::string&>(), field);
  } else if (v.is_array()) {
    if (v.size() > limits.max_observations) {
      fail(ErrorCode::kPayloadTooLarge,
           field + " has more than " + std::to_string(limits.max_observations) +
               " values",
           field);
    }
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(as_number(v[i], field + "[" + std::to_string(i) + "]"));
    }
  } else {
    fail(ErrorCode::kSchemaViolation,
         field + " must be an array of numbers or a comma-separated string",
         field);
  }
  if (out.size() > limits.max_observations) {
    fail(ErrorCode::kPayloadTooLarge,
         field + " has more than " + std::to_string(limits.max_observations) +
             " values",
         field);
  }
  return out;
}

}  // namespace detail

inline Json parse_json(std::string_view body) {
  Json j = Json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    fail(ErrorCode::kInvalidJson, "request body is not valid JSON");
  }
  return j;
}

struct ProbabilityRequest {
  dist::Distribution model;
  dist::ProbabilityQuery query;
};

/// {"distribution": tag, "params": {name: number}, "query": {"type":
/// "lower_tail" | "upper_tail", "x": number} or {"type": "interval", "a",
/// "b"}}.
inline ProbabilityRequest parse_probability_request(const Json& j) {
  using namespace detail;
  require_object(j, "");
  only_keys(j, "", {"distribution", "params", "query"});
  const auto tag = string_opt(j, "distribution", "");
  if (!tag) {
    fail(ErrorCode::kSchemaViolation, "missing field 'distribution'",
         "distribution");
  }
  const auto family = dist::family_from_tag(*tag);
  if (!family) {
    fail(ErrorCode::kUnknownDistribution, "unknown distribution '" + *tag + "'",
         "distribution");
  }
  std::map<std::string, double> params;
  if (const auto it = j.find("params"); it != j.end()) {
    require_object(*it, "params");
    for (const auto& [name, value] : it->items()) {
      params[name] = as_number(value, "params." + name);
    }
  }
  auto model = dist::make_model(*family, params);

  const auto qit = j.find("query");
  if (qit == j.end()) {
    fail(ErrorCode::kSchemaViolation, "missing field 'query'", "query");
  }
  const Json& q = *qit;
  require_object(q, "query");
  const auto type = string_opt(q, "type", "query");
  if (!type) fail(ErrorCode::kSchemaViolation, "missing field 'type'", "query.type");
  if (*type == "lower_tail" || *type == "upper_tail") {
    only_keys(q, "query", {"type", "x"});
    const double x = number(q, "x", "query");
    return {model, *type == "lower_tail" ? dist::ProbabilityQuery::lower_tail(x)
                                        : dist::ProbabilityQuery::upper_tail(x)};
  }
  if (*type == "interval") {
    only_keys(q, "query", {"type", "a", "b"});
    return {model, dist::ProbabilityQuery::interval(number(q, "a", "query"),
                                                   number(q, "b", "query"))};
  }
  fail(ErrorCode::kSchemaViolation,
       "query.type must be lower_tail, upper_tail or interval", "query.type");
}

/// {"samples": [...], "alpha", "h0", "alternative", plus the options of the
/// setting}. A sample is {"data": [...] | "1, 2, 3"} or a summary:
/// {"n", "mean", "var" | "sd"}, {"n", "successes"} or {"n", "var"}.
inline inference::InferenceRequest parse_inference_request(
    inference::Setting setting, const Json& j, const Limits& limits = {}) {
  using namespace detail;
  using inference::Setting;
  require_object(j, "");
  std::vector<std::string_view> allowed = {"samples", "alpha", "h0",
                                           "alternative"};
  switch (setting) {
    case Setting::kOneMean:
    case Setting::kTwoMeansPaired: allowed.push_back("sigma"); break;
    case Setting::kTwoMeansIndependent:
      allowed.insert(allowed.end(), {"sigma", "sigma2", "equal_variances"});
      break;
    case Setting::kTwoProportions: allowed.push_back("pooled_se"); break;
    default: break;
  }
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(ErrorCode::kSchemaViolation,
           "unknown field '" + key + "' for " +
               std::string(inference::setting_tag(setting)),
           key);
    }
  }
  inference::InferenceRequest req;
  req.setting = setting;
  auto& c = req.config;
  c.alpha = number_opt(j, "alpha", "").value_or(0.05);
  c.h0 = number_opt(j, "h0", "");
  if (const auto alt = string_opt(j, "alternative", "")) {
    const auto a = inference::alternative_from_tag(*alt);
    if (!a) {
      fail(ErrorCode::kSchemaViolation,
           "alternative must be two_sided, greater or less", "alternative");
    }
    c.alternative = *a;
  }
  c.sigma = number_opt(j, "sigma", "");
  c.sigma2 = number_opt(j, "sigma2", "");
  c.equal_variances = boolean(j, "equal_variances", "", false);
  c.pooled_se = boolean(j, "pooled_se", "", false);

  const auto sit = j.find("samples");
  if (sit == j.end() || !sit->is_array()) {
    fail(ErrorCode::kSchemaViolation, "samples must be an array", "samples");
  }
  const auto kind = inference::summary_kind(setting);
  for (std::size_t i = 0; i < sit->size(); ++i) {
    const Json& s = (*sit)[i];
    const std::string base = "samples[" + std::to_string(i) + "]";
    require_object(s, base);
    if (s.contains("data")) {
      only_keys(s, base, {"data"});
      req.samples.push_back(
          inference::RawSample{numbers(s["data"], base + ".data", limits)});
      continue;
    }
    switch (kind) {
      case inference::SummaryKind::kMean:
        only_keys(s, base, {"n", "mean", "var", "sd"});
        req.samples.push_back(inference::MeanSummary{
            number(s, "n", base), number(s, "mean", base),
            number_opt(s, "var", base), number_opt(s, "sd", base)});
        break;
      case inference::SummaryKind::kProportion:
        only_keys(s, base, {"n", "successes"});
        req.samples.push_back(inference::ProportionSummary{
            number(s, "n", base), number(s, "successes", base)});
        break;
      case inference::SummaryKind::kVariance:
        only_keys(s, base, {"n", "var"});
        req.samples.push_back(inference::VarianceSummary{
            number(s, "n", base), number(s, "var", base)});
        break;
    }
  }
  return req;
}

struct RegressionRequest {
  regression::RegressionInput input;
  bool include_steps = true;
};

/// {"x", "y" (arrays or numeric-list strings), "x_label", "y_label",
/// "confidence_level", "include_band", and for reports "include_steps"}.
inline RegressionRequest parse_regression_request(const Json& j,
                                                  bool report,
                                                  const Limits& limits = {}) {
  using namespace detail;
  require_object(j, "");
  if (report) {
    only_keys(j, "", {"x", "y", "x_label", "y_label", "confidence_level",
                      "include_band", "include_steps"});
  } else {
    only_keys(j, "", {"x", "y", "x_label", "y_label", "confidence_level",
                      "include_band"});
  }
  RegressionRequest r;
  for (const char* key : {"x", "y"}) {
    const auto it = j.find(key);
    if (it == j.end()) {
      fail(ErrorCode::kSchemaViolation, std::string("missing field '") + key + "'",
           key);
    }
    (key[0] == 'x' ? r.input.x : r.input.y) = numbers(*it, key, limits);
  }
  r.input.x_label = string_opt(j, "x_label", "").value_or("x");
  r.input.y_label = string_opt(j, "y_label", "").value_or("y");
  r.input.confidence_level =
      number_opt(j, "confidence_level", "").value_or(0.95);
  r.input.include_band = boolean(j, "include_band", "", true);
  r.include_steps = boolean(j, "include_steps", "", true);
  regression::validate(r.input);
  return r;
}

// --- Serialization ---------------------------------------------------------

namespace detail {

inline Json real(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

inline std::string display(double v) {
  if (std::isnan(v)) return "undefined";
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  return format_fixed4(v);
}

// Sets `key` at full precision and `key_display` to its 4-dp rendering.
inline void put(Json& j, const std::string& key, double v) {
  j[key] = real(v);
  j[key + "_display"] = display(v);
}

inline void put(Json& j, const std::string& key,
                const std::optional<double>& v) {
  if (v) {
    put(j, key, *v);
  } else {
    j[key] = nullptr;
    j[key + "_display"] = "undefined";
  }
}

inline Json reals(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(real(x));
  return a;
}

inline Json displays(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(display(x));
  return a;
}

}  // namespace detail

inline Json to_json(const DerivationDocument& d) {
  Json sections = Json::array();
  for (const auto& s : d.sections) {
    Json steps = Json::array();
    for (const auto& st : s.steps) {
      Json values = Json::object();
      for (const auto& [k, v] : st.values) values[k] = detail::real(v);
      steps.push_back({{"kind", st.kind == StepKind::kMath ? "math" : "text"},
                       {"tex_template", st.tex_template},
                       {"values", values},
                       {"display", st.display}});
    }
    sections.push_back({{"title", s.title}, {"steps", steps}});
  }
  return {{"title", d.title}, {"sections", sections}};
}

inline Json to_json(const dist::PlotData& p) {
  Json shaded = Json::array();
  for (const auto& r : p.shaded) {
    shaded.push_back({{"lo", detail::real(r.lo)}, {"hi", detail::real(r.hi)}});
  }
  Json j = {{"is_discrete", p.is_discrete},
            {"support_grid", detail::reals(p.grid)},
            {"density_or_mass", detail::reals(p.density)},
            {"shaded", shaded}};
  j["marker"] = p.marker ? detail::real(*p.marker) : Json(nullptr);
  return j;
}

inline Json to_json(const dist::Moments& m) {
  Json j = Json::object();
  detail::put(j, "mean", m.mean);
  detail::put(j, "sd", m.sd);
  detail::put(j, "variance", m.variance);
  return j;
}

inline Json query_json(const dist::ProbabilityQuery& q) {
  Json j = {{"type", dist::query_kind_tag(q.kind)}};
  if (q.kind == dist::QueryKind::kInterval) {
    j["a"] = detail::real(q.a);
    j["b"] = detail::real(q.b);
  } else {
    j["x"] = detail::real(q.a);
  }
  return j;
}

inline Json model_params_json(const dist::Distribution& model) {
  Json params = Json::object();
  for (const auto& [name, value] : model.params()) params[name] = value;
  return params;
}

inline Json probability_json(const dist::Distribution& model,
                             const dist::ProbabilityQuery& q,
                             const dist::ProbabilityResult& r) {
  Json j = {{"distribution", dist::tag(model.family())},
            {"params", model_params_json(model)},
            {"query", query_json(q)}};
  j["value"] = r.value;
  j["display_value"] = r.display_value;
  j["moments"] = to_json(r.moments);
  j["derivation"] = to_json(r.derivation);
  j["plot"] = to_json(r.plot);
  return j;
}

inline Json to_json(const inference::SampleSummary& s) {
  Json j = Json::object();
  j["n"] = s.n;
  if (s.mean) detail::put(j, "mean", *s.mean);
  if (s.sd) detail::put(j, "sd", *s.sd);
  if (s.variance) detail::put(j, "variance", *s.variance);
  if (s.successes) j["successes"] = *s.successes;
  if (s.p_hat) detail::put(j, "p_hat", *s.p_hat);
  return j;
}

inline Json inference_json(const inference::InferenceResult& r) {
  using detail::put;
  Json config = Json::object();
  config["alpha"] = r.config.alpha;
  config["h0"] = r.h0;
  config["alternative"] = inference::alternative_tag(r.config.alternative);
  config["sigma"] = r.config.sigma ? Json(*r.config.sigma) : Json(nullptr);
  config["sigma2"] = r.config.sigma2 ? Json(*r.config.sigma2) : Json(nullptr);
  config["equal_variances"] = r.config.equal_variances;
  config["pooled_se"] = r.config.pooled_se;

  Json j = {{"setting", inference::setting_tag(r.setting)}, {"config", config}};
  Json summaries = Json::array();
  for (const auto& s : r.summaries) summaries.push_back(to_json(s));
  j["summary_stats"] = summaries;
  if (r.difference_summary) {
    j["differences"] = detail::reals(r.differences);
    j["difference_stats"] = to_json(*r.difference_summary);
  }
  put(j, "estimate", r.estimate);
  put(j, "standard_error", r.standard_error);
  if (r.ci_standard_error) put(j, "ci_standard_error", *r.ci_standard_error);
  if (r.pooled_variance) put(j, "pooled_variance", *r.pooled_variance);
  if (r.pooled_proportion) put(j, "pooled_proportion", *r.pooled_proportion);

  Json ci = Json::object();
  put(ci, "lower", r.ci.lower);
  put(ci, "upper", r.ci.upper);
  ci["sidedness"] = inference::alternative_tag(r.ci.sidedness);
  ci["level"] = r.ci.level;
  j["ci"] = ci;
  j["ci_quantiles"] = detail::reals(r.ci_quantiles);

  put(j, "statistic", r.statistic);
  Json family = {{"family", inference::statistic_family_tag(
                                r.null_distribution.family)}};
  switch (r.null_distribution.family) {
    case inference::StatisticFamily::kNormal: break;
    case inference::StatisticFamily::kFisher:
      family["df1"] = r.null_distribution.df1;
      family["df2"] = r.null_distribution.df2;
      break;
    default: family["df"] = r.null_distribution.df1; break;
  }
  j["statistic_family"] = family;
  j["critical_values"] = detail::reals(r.critical_values);
  j["critical_values_display"] = detail::displays(r.critical_values);
  j["p_value"] = r.p_value;
  j["p_value_display"] = format_p_value(r.p_value);
  j["decision"] = inference::decision_tag(r.decision);
  j["approximation_warning"] = r.approximation_warning;
  j["interpretation"] = inference::interpret(r, r.config.alpha);
  j["narrative"] = to_json(r.narrative);
  j["plot"] = to_json(r.plot);
  return j;
}

inline Json points_json(const std::vector<regression::Point>& pts) {
  Json a = Json::array();
  for (const auto& p : pts) a.push_back({detail::real(p.x), detail::real(p.y)});
  return a;
}

inline Json optional_reals(const std::vector<std::optional<double>>& xs) {
  Json a = Json::array();
  for (const auto& x : xs) a.push_back(x ? detail::real(*x) : Json(nullptr));
  return a;
}

inline Json regression_json(const regression::RegressionInput& in) {
  using detail::put;
  const auto f = regression::fit(in);
  Json fit = Json::object();
  fit["n"] = f.n;
  put(fit, "x_mean", f.x_mean);
  put(fit, "y_mean", f.y_mean);
  put(fit, "sum_xy", f.sum_xy);
  put(fit, "sxx", f.sxx);
  put(fit, "syy", f.syy);
  put(fit, "sxy", f.sxy);
  put(fit, "beta0", f.beta0);
  put(fit, "beta1", f.beta1);
  put(fit, "sse", f.sse);
  put(fit, "sigma_hat", f.sigma_hat);
  fit["df_resid"] = f.df_resid;
  put(fit, "se_beta0", f.se_beta0);
  put(fit, "se_beta1", f.se_beta1);
  put(fit, "t0", f.t0);
  put(fit, "t1", f.t1);
  put(fit, "p0", f.p0);
  put(fit, "p1", f.p1);
  if (f.p0) fit["p0_display"] = format_p_value(*f.p0);
  if (f.p1) fit["p1_display"] = format_p_value(*f.p1);
  fit["degenerate"] = f.degenerate;
  put(fit, "r_squared", f.r_squared);
  put(fit, "adj_r_squared", f.adj_r_squared);
  fit["fitted"] = detail::reals(f.fitted);
  fit["residuals"] = detail::reals(f.residuals);

  const auto table = regression::summary_table(f);
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    Json r = {{"term", row.term}};
    put(r, "estimate", row.estimate);
    if (table.degenerate) {
      put(r, "std_error", std::optional<double>());
    } else {
      put(r, "std_error", row.std_error);
    }
    put(r, "t_value", row.t_value);
    put(r, "p_value", row.p_value);
    if (row.p_value) r["p_value_display"] = format_p_value(*row.p_value);
    rows.push_back(r);
  }
  Json tj = {{"rows", rows}};
  put(tj, "sigma_hat", table.sigma_hat);
  tj["df_resid"] = table.df_resid;
  put(tj, "r_squared", table.r_squared);
  put(tj, "adj_r_squared", table.adj_r_squared);
  tj["degenerate"] = table.degenerate;

  Json j = {{"x_label", in.x_label},
            {"y_label", in.y_label},
            {"confidence_level", in.confidence_level},
            {"fit", fit},
            {"derivation", to_json(regression::derivation(in, f))},
            {"table", tj}};
  if (in.include_band && !f.degenerate) {
    const auto b = regression::confidence_band(in, f);
    j["band"] = {{"level", b.level},
                 {"grid", detail::reals(b.grid)},
                 {"fit", detail::reals(b.fit)},
                 {"lower", detail::reals(b.lower)},
                 {"upper", detail::reals(b.upper)}};
  } else {
    j["band"] = nullptr;
  }
  if (!f.degenerate) {
    const auto d = regression::diagnostics(in, f);
    j["diagnostics"] = {
        {"residuals_vs_fitted", points_json(d.residuals_vs_fitted)},
        {"qq_points", points_json(d.qq_points)},
        {"scale_location", points_json(d.scale_location)},
        {"leverage", detail::reals(d.leverage)},
        {"cooks_distance", optional_reals(d.cooks_distance)},
        {"standardized_residuals", optional_reals(d.standardized_residuals)}};
  } else {
    j["diagnostics"] = nullptr;
  }
  j["interpretation"] = regression::interpret_fit(f, in.x_label, in.y_label);
  return j;
}

inline Json catalog_json() {
  Json list = Json::array();
  for (auto f : dist::kAllFamilies) {
    const auto info = dist::family_info(f);
    Json params = Json::array();
    for (const auto& p : info.params) {
      params.push_back({{"name", p.name},
                        {"integer", p.integer},
                        {"constraint", p.constraint}});
    }
    Json entry = {{"tag", dist::tag(f)},
                  {"name", info.display_name},
                  {"discrete", info.discrete},
                  {"params", params},
                  {"support", info.support}};
    if (f == dist::Family::kNormal) {
      entry["alternative_params"] = {{{"name", "sd"},
                                      {"replaces", "var"},
                                      {"constraint", "> 0"}}};
    }
    list.push_back(entry);
  }
  return {{"distributions", list}};
}

inline Json settings_json() {
  using inference::Setting;
  Json list = Json::array();
  for (auto s : inference::kAllSettings) {
    const auto kind = inference::summary_kind(s);
    Json forms = Json::array();
    forms.push_back({{"kind", "raw"}, {"fields", {"data"}}});
    if (s != Setting::kTwoMeansPaired) {
      switch (kind) {
        case inference::SummaryKind::kMean:
          forms.push_back({{"kind", "summary"},
                           {"fields", {"n", "mean", "var"}},
                           {"alternatives", {{{"sd", "var"}}}}});
          break;
        case inference::SummaryKind::kProportion:
          forms.push_back({{"kind", "summary"}, {"fields", {"n", "successes"}}});
          break;
        case inference::SummaryKind::kVariance:
          forms.push_back({{"kind", "summary"}, {"fields", {"n", "var"}}});
          break;
      }
    }
    Json options = Json::array();
    switch (s) {
      case Setting::kOneMean:
      case Setting::kTwoMeansPaired: options = {"sigma"}; break;
      case Setting::kTwoMeansIndependent:
        options = {"sigma", "sigma2", "equal_variances"};
        break;
      case Setting::kTwoProportions: options = {"pooled_se"}; break;
      default: break;
    }
    const char* kinds[] = {"mean", "proportion", "variance"};
    list.push_back({{"tag", inference::setting_tag(s)},
                    {"samples", inference::sample_count(s)},
                    {"summary_kind", kinds[static_cast<int>(kind)]},
                    {"sample_forms", forms},
                    {"h0_default", inference::default_h0(s)},
                    {"options", options},
                    {"alternatives", {"two_sided", "greater", "less"}}});
  }
  return {{"settings", list}};
}

inline Json health_json() {
  return {{"status", "ok"}, {"service", "statlab"}, {"version", kVersion},
          {"api", "v1"}};
}

// --- Routing ---------------------------------------------------------------

struct Response {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

inline int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownDistribution:
    case ErrorCode::kUnknownSetting:
    case ErrorCode::kNotFound: return 404;
    case ErrorCode::kMethodNotAllowed: return 405;
    case ErrorCode::kPayloadTooLarge: return 413;
    case ErrorCode::kInternal: return 500;
    default: return 422;
  }
}

inline Json error_json(ErrorCode code, const std::string& message,
                       const std::string& field) {
  Json j = {{"code", error_code_name(code)}, {"message", message}};
  j["field"] = field.empty() ? Json(nullptr) : Json(field);
  return j;
}

inline Response error_response(const StatError& e) {
  return {http_status(e.code()), "application/json",
          error_json(e.code(), e.what(), e.field()).dump()};
}

inline Response json_response(const Json& j) {
  return {200, "application/json", j.dump()};
}

inline Response probability_endpoint(std::string_view body) {
  const auto req = parse_probability_request(parse_json(body));
  const auto r = dist::probability(req.model, req.query);
  return json_response(probability_json(req.model, req.query, r));
}

inline Response inference_endpoint(std::string_view tag, std::string_view body,
                                   const Limits& limits) {
  const auto setting = inference::setting_from_tag(tag);
  if (!setting) {
    fail(ErrorCode::kUnknownSetting,
         "unknown inference setting '" + std::string(tag) + "'", "setting");
  }
  const auto req = parse_inference_request(*setting, parse_json(body), limits);
  return json_response(inference_json(inference::run_test(req)));
}

inline Response regression_endpoint(std::string_view body,
                                    const Limits& limits) {
  const auto req = parse_regression_request(parse_json(body), false, limits);
  return json_response(regression_json(req.input));
}

inline Response report_endpoint(std::string_view body, const Limits& limits) {
  const auto req = parse_regression_request(parse_json(body), true, limits);
  narrative::ReportRequest rr{req.input, req.include_steps, std::string(body)};
  return {200, "text/html; charset=utf-8", narrative::regression_report(rr)};
}

/// Routes one request. Never throws: engine errors become ApiError
/// documents and anything unexpected becomes a 500.
inline Response handle(std::string_view method, std::string_view target,
                       std::string_view body, const Limits& limits = {}) {
  try {
    std::string_view path = target.substr(0, target.find('?'));
    if (path.size() > 1 && path.back() == '/') path.remove_suffix(1);
    if (path.substr(0, kApiPrefix.size()) != kApiPrefix) {
      fail(ErrorCode::kNotFound, "no such endpoint: " + std::string(path));
    }
    const std::string_view route = path.substr(kApiPrefix.size());
    const bool get = method == "GET";
    const bool post = method == "POST";
    auto require = [&](bool ok) {
      if (!ok) {
        fail(ErrorCode::kMethodNotAllowed,
             std::string(method) + " is not allowed on " + std::string(path));
      }
    };
    if (post && body.size() > limits.max_body_bytes) {
      fail(ErrorCode::kPayloadTooLarge,
           "request body exceeds " + std::to_string(limits.max_body_bytes) +
               " bytes");
    }
    if (route == "/health") {
      require(get);
      return json_response(health_json());
    }
    if (route == "/distributions") {
      require(get);
      return json_response(catalog_json());
    }
    if (route == "/inference/settings") {
      require(get);
      return json_response(settings_json());
    }
    if (route == "/probability") {
      require(post);
      return probability_endpoint(body);
    }
    if (route == "/regression") {
      require(post);
      return regression_endpoint(body, limits);
    }
    if (route == "/regression/report") {
      require(post);
      return report_endpoint(body, limits);
    }
    constexpr std::string_view kInference = "/inference/";
    if (route.substr(0, kInference.size()) == kInference &&
        route.find('/', kInference.size()) == std::string_view::npos) {
      require(post);
      return inference_endpoint(route.substr(kInference.size()), body, limits);
    }
    fail(ErrorCode::kNotFound, "no such endpoint: " + std::string(path));
  } catch (const StatError& e) {
    return error_response(e);
  } catch (const std::exception& e) {
    return {500, "application/json",
            error_json(ErrorCode::kInternal, e.what(), "").dump()};
  }
}

}  // namespace statlab::service
