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

// Command-line front end: `prob`, `test` and `regress`. Flags translate to
// the same JSON requests the HTTP API accepts, so JSON mode prints exactly
// the API response. run_cli is callable in-process for tests.
//
// Exit codes: 0 success, 2 usage or validation error, 3 I/O error.

#pragma once

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "statlab/derivation.hpp"
#include "statlab/error.hpp"
#include "statlab/narrative.hpp"
#include "statlab/service.hpp"

namespace statlab::cli {

enum class OutputMode { kText, kJson, kTex };

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitIo = 3;

namespace detail {

using service::Json;

inline std::string render(const Step& s, OutputMode mode) {
  return mode == OutputMode::kTex ? s.display
                                  : narrative::tex_to_plain(s.display);
}

inline void print_document(const DerivationDocument& doc, OutputMode mode,
                           std::ostream& out) {
  for (const auto& section : doc.sections) {
    out << "\n" << section.title << "\n";
    const bool numbered = section.title == "Hypothesis test";
    for (std::size_t i = 0; i < section.steps.size(); ++i) {
      out << "  ";
      if (numbered) out << "(" << i + 1 << ") ";
      out << render(section.steps[i], mode) << "\n";
    }
  }
}

inline double parse_number(const std::string& s, const std::string& field) {
  const auto v = service::parse_numeric_list(s, field);
  if (v.size() != 1) {
    fail(ErrorCode::kParseError, "expected a single number", field);
  }
  return v.front();
}

struct ProbOptions {
  std::string distribution;
  std::vector<std::string> params;
  std::optional<double> lower;
  std::optional<double> upper;
  std::vector<double> between;
};

inline Json prob_request(const ProbOptions& o) {
  Json params = Json::object();
  for (const auto& p : o.params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) {
      fail(ErrorCode::kInvalidParameter,
           "--param expects name=value, got '" + p + "'", "params");
    }
    const std::string name = p.substr(0, eq);
    params[name] = parse_number(p.substr(eq + 1), "params." + name);
  }
  Json query;
  if (o.lower) {
    query = {{"type", "lower_tail"}, {"x", *o.lower}};
  } else if (o.upper) {
    query = {{"type", "upper_tail"}, {"x", *o.upper}};
  } else if (o.between.size() == 2) {
    query = {{"type", "interval"}, {"a", o.between[0]}, {"b", o.between[1]}};
  } else {
    fail(ErrorCode::kSchemaViolation,
         "one of --lower, --upper or --between is required", "query");
  }
  return {{"distribution", o.distribution}, {"params", params},
          {"query", query}};
}

inline int run_prob(const ProbOptions& o, OutputMode mode, std::ostream& out) {
  const Json request = prob_request(o);
  const auto req = service::parse_probability_request(request);
  const auto r = dist::probability(req.model, req.query);
  if (mode == OutputMode::kJson) {
    out << service::probability_json(req.model, req.query, r).dump() << "\n";
    return kExitOk;
  }
  out << r.display_value << "\n";
  print_document(r.derivation, mode, out);
  return kExitOk;
}

struct SampleOptions {
  std::optional<std::string> data;
  std::optional<double> n, mean, var, sd, successes;
};

struct TestOptions {
  std::string setting;
  SampleOptions s1, s2;
  std::optional<double> alpha, h0, sigma, sigma2;
  std::optional<std::string> alternative;
  bool equal_variances = false;
  bool pooled_se = false;
};

inline Json sample_json(const SampleOptions& s) {
  Json j = Json::object();
  if (s.data) j["data"] = *s.data;
  if (s.n) j["n"] = *s.n;
  if (s.mean) j["mean"] = *s.mean;
  if (s.var) j["var"] = *s.var;
  if (s.sd) j["sd"] = *s.sd;
  if (s.successes) j["successes"] = *s.successes;
  return j;
}

inline bool empty(const SampleOptions& s) {
  return !s.data && !s.n && !s.mean && !s.var && !s.sd && !s.successes;
}

inline Json test_request(const TestOptions& o) {
  Json j = Json::object();
  Json samples = Json::array();
  samples.push_back(sample_json(o.s1));
  if (!empty(o.s2)) samples.push_back(sample_json(o.s2));
  j["samples"] = samples;
  if (o.alpha) j["alpha"] = *o.alpha;
  if (o.h0) j["h0"] = *o.h0;
  if (o.alternative) {
    j["alternative"] = *o.alternative == "two" ? "two_sided" : *o.alternative;
  }
  if (o.sigma) j["sigma"] = *o.sigma;
  if (o.sigma2) j["sigma2"] = *o.sigma2;
  if (o.equal_variances) j["equal_variances"] = true;
  if (o.pooled_se) j["pooled_se"] = true;
  return j;
}

inline int run_test(const TestOptions& o, OutputMode mode, std::ostream& out) {
  const auto setting = inference::setting_from_tag(o.setting);
  if (!setting) {
    fail(ErrorCode::kUnknownSetting,
         "unknown inference setting '" + o.setting + "'", "setting");
  }
  const auto req = service::parse_inference_request(*setting, test_request(o),
                                                    service::Limits{});
  const auto r = inference::run_test(req);
  if (mode == OutputMode::kJson) {
    out << service::inference_json(r).dump() << "\n";
    return kExitOk;
  }
  out << "statistic " << format_fixed4(r.statistic) << ", p-value "
      << format_p_value(r.p_value) << ", "
      << inference::decision_tag(r.decision) << "\n";
  print_document(r.narrative, mode, out);
  return kExitOk;
}

struct RegressOptions {
  std::string x, y;
  std::vector<std::string> labels;
  std::optional<std::string> x_label, y_label;
  std::optional<double> level;
  bool no_band = false;
  bool no_steps = false;
  std::optional<std::string> report;
};

inline Json regress_request(const RegressOptions& o) {
  Json j = {{"x", o.x}, {"y", o.y}};
  std::optional<std::string> xl = o.x_label, yl = o.y_label;
  if (o.labels.size() == 2) {
    xl = o.labels[0];
    yl = o.labels[1];
  }
  if (xl) j["x_label"] = *xl;
  if (yl) j["y_label"] = *yl;
  if (o.level) j["confidence_level"] = *o.level;
  if (o.no_band) j["include_band"] = false;
  return j;
}

inline int run_regress(const RegressOptions& o, OutputMode mode,
                       std::ostream& out, std::ostream& err) {
  Json request = regress_request(o);
  const auto req = service::parse_regression_request(request, false);
  if (o.report) {
    request["include_steps"] = !o.no_steps;
    const narrative::ReportRequest rr{req.input, !o.no_steps, request.dump()};
    const std::string html = narrative::regression_report(rr);
    std::ofstream file(*o.report, std::ios::binary);
    if (!file || !(file << html) || !file.flush()) {
      err << "error: cannot write report to '" << *o.report << "'\n";
      return kExitIo;
    }
  }
  if (mode == OutputMode::kJson) {
    out << service::regression_json(req.input).dump() << "\n";
    return kExitOk;
  }
  const auto f = regression::fit(req.input);
  if (!o.no_steps) {
    print_document(regression::derivation(req.input, f), mode, out);
  }
  const auto t = regression::summary_table(f);
  out << "\nCoefficients\n";
  char line[160];
  std::snprintf(line, sizeof line, "  %-12s %12s %12s %12s %10s\n", "", "Estimate",
                "Std. Error", "t value", "p-value");
  out << line;
  for (const auto& row : t.rows) {
    auto cell = [](const std::optional<double>& v) {
      return v ? format_fixed4(*v) : std::string("NA");
    };
    std::snprintf(
        line, sizeof line, "  %-12s %12s %12s %12s %10s\n", row.term.c_str(),
        format_fixed4(row.estimate).c_str(),
        t.degenerate ? "NA" : format_fixed4(row.std_error).c_str(),
        cell(row.t_value).c_str(),
        row.p_value ? format_p_value(*row.p_value).c_str() : "NA");
    out << line;
  }
  out << "  sigma-hat " << format_fixed4(t.sigma_hat) << " on "
      << format_compact(t.df_resid) << " df, R^2 " << format_fixed4(t.r_squared)
      << ", adjusted R^2 " << format_fixed4(t.adj_r_squared) << "\n";
  out << "\nInterpretation\n  "
      << regression::interpret_fit(f, req.input.x_label, req.input.y_label)
      << "\n";
  return kExitOk;
}

inline void add_sample_flags(CLI::App* cmd, SampleOptions& s,
                             const std::string& suffix, bool primary) {
  auto names = [&](const std::string& base) {
    std::string n = "--" + base + suffix;
    if (primary) n += ",--" + base + "1";
    return n;
  };
  cmd->add_option(primary ? "--data,--data1" : "--data2", s.data,
                  "Raw observations, comma-separated");
  cmd->add_option(names("n"), s.n, "Sample size");
  cmd->add_option(names("mean"), s.mean, "Sample mean");
  cmd->add_option(names("var"), s.var, "Sample variance");
  cmd->add_option(names("sd"), s.sd, "Sample standard deviation");
  cmd->add_option(names("successes"), s.successes, "Number of successes");
}

}  // namespace detail

/// Runs one invocation; `args` excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"statlab: probabilities, tests and regression"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(service::kVersion));
  std::string mode_name = "text";
  const std::map<std::string, OutputMode> modes = {
      {"text", OutputMode::kText},
      {"json", OutputMode::kJson},
      {"tex", OutputMode::kTex}};
  auto add_mode = [&](CLI::App* cmd) {
    cmd->add_option("--mode", mode_name, "Output: text, json or tex")
        ->check(CLI::IsMember({"text", "json", "tex"}));
  };

  detail::ProbOptions prob;
  auto* prob_cmd = app.add_subcommand("prob", "Probability under a distribution");
  prob_cmd->add_option("distribution", prob.distribution, "Distribution tag")
      ->required();
  prob_cmd->add_option("--param", prob.params, "Parameter as name=value");
  auto* lower = prob_cmd->add_option("--lower", prob.lower, "P(X <= x)");
  auto* upper = prob_cmd->add_option("--upper", prob.upper, "P(X > x)");
  auto* between = prob_cmd->add_option("--between", prob.between,
                                       "P(a <= X <= b)")
                      ->expected(2);
  lower->excludes(upper)->excludes(between);
  upper->excludes(between);
  add_mode(prob_cmd);

  detail::TestOptions test;
  auto* test_cmd = app.add_subcommand("test", "Confidence interval and test");
  test_cmd->add_option("setting", test.setting, "Inference setting")->required();
  detail::add_sample_flags(test_cmd, test.s1, "", true);
  detail::add_sample_flags(test_cmd, test.s2, "2", false);
  test_cmd->add_option("--alpha", test.alpha, "Significance level");
  test_cmd->add_option("--h0", test.h0, "Null hypothesis value");
  test_cmd->add_option("--alt,--alternative", test.alternative,
                       "two, greater or less")
      ->check(CLI::IsMember({"two", "two_sided", "greater", "less"}));
  test_cmd->add_option("--sigma", test.sigma, "Known population sd");
  test_cmd->add_option("--sigma2", test.sigma2, "Known sd of sample 2");
  test_cmd->add_flag("--equal-variances", test.equal_variances,
                     "Pooled two-sample t");
  test_cmd->add_flag("--pooled-se,--pooled", test.pooled_se,
                     "Pooled two-proportion standard error");
  add_mode(test_cmd);

  detail::RegressOptions reg;
  auto* reg_cmd = app.add_subcommand("regress", "Simple linear regression");
  reg_cmd->add_option("--x", reg.x, "Predictor values")->required();
  reg_cmd->add_option("--y", reg.y, "Response values")->required();
  reg_cmd->add_option("--labels", reg.labels, "x and y labels")->expected(2);
  reg_cmd->add_option("--x-label", reg.x_label, "Predictor label");
  reg_cmd->add_option("--y-label", reg.y_label, "Response label");
  reg_cmd->add_option("--level", reg.level, "Confidence level of the band");
  reg_cmd->add_flag("--no-band", reg.no_band, "Omit the confidence band");
  reg_cmd->add_flag("--no-steps", reg.no_steps, "Omit the derivation");
  reg_cmd->add_option("--report", reg.report, "Write an HTML report here");
  add_mode(reg_cmd);

  std::vector<const char*> argv{"statlab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  const OutputMode mode = modes.at(mode_name);
  try {
    if (*prob_cmd) return detail::run_prob(prob, mode, out);
    if (*test_cmd) return detail::run_test(test, mode, out);
    return detail::run_regress(reg, mode, out, err);
  } catch (const StatError& e) {
    err << "error: " << e.what();
    if (!e.field().empty()) err << " (" << e.field() << ")";
    err << "\n";
    if (mode == OutputMode::kJson) {
      out << service::error_json(e.code(), e.what(), e.field()).dump() << "\n";
    }
    return e.code() == ErrorCode::kInternal ? kExitIo : kExitValidation;
  }
}

}  // namespace statlab::cli
