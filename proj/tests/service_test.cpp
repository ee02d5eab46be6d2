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

#include "statlab/service.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <string>
#include <vector>

#include "schema_check.hpp"
#include "statlab/probability.hpp"

namespace service = statlab::service;
namespace dist = statlab::dist;
namespace reg = statlab::regression;
using service::Json;
using statlab::ErrorCode;
using statlab::StatError;

namespace {

const std::string kSchemaDir = std::string(STATLAB_TEST_DATA_DIR) + "/schemas";

service::Response post(const std::string& path, const std::string& body,
                       const service::Limits& limits = {}) {
  return service::handle("POST", "/api/v1" + path, body, limits);
}

service::Response get(const std::string& path) {
  return service::handle("GET", "/api/v1" + path, "");
}

std::string error_code(const service::Response& r) {
  return Json::parse(r.body).at("code").get<std::string>();
}

ErrorCode parse_error(std::string_view text) {
  try {
    service::parse_numeric_list(text);
  } catch (const StatError& e) {
    return e.code();
  }
  ADD_FAILURE() << "accepted '" << text << "'";
  return ErrorCode::kInternal;
}

}  // namespace

TEST(NumericList, Grammar) {
  EXPECT_EQ(service::parse_numeric_list("1, 2.5,3"),
            (std::vector<double>{1.0, 2.5, 3.0}));
  EXPECT_EQ(service::parse_numeric_list("1;2\n3"),
            (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(service::parse_numeric_list("  -1e3 ,+4 "),
            (std::vector<double>{-1000, 4}));
  EXPECT_EQ(service::parse_numeric_list("0.1"), (std::vector<double>{0.1}));
}

TEST(NumericList, Rejections) {
  EXPECT_EQ(parse_error("1,,2"), ErrorCode::kParseError);
  EXPECT_EQ(parse_error(""), ErrorCode::kParseError);
  EXPECT_EQ(parse_error("1,"), ErrorCode::kParseError);
  EXPECT_EQ(parse_error("abc"), ErrorCode::kParseError);
  EXPECT_EQ(parse_error("inf"), ErrorCode::kParseError);
  EXPECT_EQ(parse_error("nan"), ErrorCode::kParseError);
  EXPECT_EQ(parse_error("1e999"), ErrorCode::kParseError);
  EXPECT_EQ(parse_error("1 2"), ErrorCode::kParseError);
  EXPECT_EQ(parse_error("++1"), ErrorCode::kParseError);
}

TEST(NumericList, ReportsItemIndex) {
  try {
    service::parse_numeric_list("1,,2");
    FAIL();
  } catch (const StatError& e) {
    EXPECT_NE(std::string(e.what()).find("item 2"), std::string::npos)
        << e.what();
  }
  try {
    service::parse_numeric_list("1;2;x");
    FAIL();
  } catch (const StatError& e) {
    EXPECT_NE(std::string(e.what()).find("item 3"), std::string::npos);
  }
}

TEST(Endpoints, Health) {
  const auto r = get("/health");
  EXPECT_EQ(r.status, 200);
  const auto j = Json::parse(r.body);
  EXPECT_EQ(j.at("status"), "ok");
  EXPECT_EQ(j.at("version"), std::string(service::kVersion));
}

TEST(Endpoints, CatalogAndSettings) {
  const auto cat = Json::parse(get("/distributions").body);
  const auto& list = cat.is_array() ? cat : cat.at("distributions");
  EXPECT_EQ(list.size(), 18u);
  const auto set = Json::parse(get("/inference/settings").body);
  const auto& settings = set.is_array() ? set : set.at("settings");
  EXPECT_EQ(settings.size(), 7u);
}

TEST(Endpoints, ProbabilityNormal) {
  const auto r = post("/probability", R"({"distribution":"normal",
      "params":{"mu":0,"var":1},
      "query":{"type":"lower_tail","x":1}})");
  ASSERT_EQ(r.status, 200) << r.body;
  const auto j = Json::parse(r.body);
  EXPECT_EQ(j.at("display_value"), "0.8413");
  // Bit-for-bit agreement with the library.
  const double direct = dist::probability(dist::Distribution::normal(0, 1),
                                          dist::ProbabilityQuery::lower_tail(1))
                            .value;
  EXPECT_EQ(j.at("value").get<double>(), direct);
}

TEST(Endpoints, NormalAcceptsSdOrVarianceButNotBoth) {
  const auto sd = post("/probability", R"({"distribution":"normal",
      "params":{"mu":0,"sd":2},"query":{"type":"lower_tail","x":2}})");
  const auto var = post("/probability", R"({"distribution":"normal",
      "params":{"mu":0,"var":4},"query":{"type":"lower_tail","x":2}})");
  ASSERT_EQ(sd.status, 200) << sd.body;
  ASSERT_EQ(var.status, 200) << var.body;
  EXPECT_EQ(Json::parse(sd.body).at("value"), Json::parse(var.body).at("value"));
  const auto both = post("/probability", R"({"distribution":"normal",
      "params":{"mu":0,"sd":2,"var":4},
      "query":{"type":"lower_tail","x":2}})");
  EXPECT_EQ(both.status, 422);
}

TEST(Endpoints, OneMeanRaw) {
  const auto r = post("/inference/one_mean",
                      R"({"samples":[{"data":[1,2,3,4,5]}],"h0":3})");
  ASSERT_EQ(r.status, 200) << r.body;
  const auto j = Json::parse(r.body);
  EXPECT_EQ(j.at("statistic").get<double>(), 0.0);
  EXPECT_EQ(j.at("decision"), "fail_to_reject");
  EXPECT_EQ(j.at("narrative").at("sections").size(), 4u);
}

TEST(Endpoints, NumericListStringsInPayloads) {
  const auto a = post("/inference/one_mean",
                      R"({"samples":[{"data":"1, 2;3\n4,5"}],"h0":3})");
  const auto b = post("/inference/one_mean",
                      R"({"samples":[{"data":[1,2,3,4,5]}],"h0":3})");
  ASSERT_EQ(a.status, 200) << a.body;
  EXPECT_EQ(a.body, b.body);
  const auto bad =
      post("/inference/one_mean", R"({"samples":[{"data":"1,,2"}],"h0":3})");
  EXPECT_EQ(bad.status, 422);
  EXPECT_EQ(error_code(bad), "parse_error");
}

TEST(Endpoints, Regression) {
  const auto r = post("/regression", R"({"x":[1,2,3,4],"y":[2,3,5,4]})");
  ASSERT_EQ(r.status, 200) << r.body;
  const auto fit = Json::parse(r.body).at("fit");
  EXPECT_NEAR(fit.at("beta1").get<double>(), 0.8, 1e-15);
  EXPECT_NEAR(fit.at("beta0").get<double>(), 1.5, 1e-15);
  reg::RegressionInput in;
  in.x = {1, 2, 3, 4};
  in.y = {2, 3, 5, 4};
  const auto f = reg::fit(in);
  EXPECT_EQ(fit.at("beta1").get<double>(), f.beta1);
  EXPECT_EQ(fit.at("sigma_hat").get<double>(), f.sigma_hat);
  EXPECT_EQ(fit.at("beta1_display"), "0.8000");
}

TEST(Endpoints, ReportIsHtmlWithVerbatimReplay) {
  const std::string body = R"({"x":[1,2,3,4],"y":[2,3,5,4],"include_steps":false})";
  const auto r = post("/regression/report", body);
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(r.content_type.rfind("text/html", 0), 0u);
  EXPECT_NE(r.body.find(body), std::string::npos);
  EXPECT_EQ(r.body.find("id=\"derivation\""), std::string::npos);
}

TEST(Errors, StatusMapping) {
  EXPECT_EQ(get("/nope").status, 404);
  EXPECT_EQ(service::handle("GET", "/elsewhere", "").status, 404);
  EXPECT_EQ(post("/health", "{}").status, 405);
  EXPECT_EQ(get("/probability").status, 405);
  EXPECT_EQ(service::handle("DELETE", "/api/v1/regression", "").status, 405);
  const auto unknown = post("/inference/three_means", "{}");
  EXPECT_EQ(unknown.status, 404);
  EXPECT_EQ(error_code(unknown), "unknown_setting");
  const auto tag = post("/probability", R"({"distribution":"zipf",
      "params":{},"query":{"type":"lower_tail","x":1}})");
  EXPECT_EQ(tag.status, 404);
  EXPECT_EQ(error_code(tag), "unknown_distribution");
  EXPECT_EQ(post("/regression", "{not json").status, 422);
  EXPECT_EQ(post("/regression", R"({"x":[1,2],"y":[1,2,3]})").status, 422);
  EXPECT_EQ(error_code(post("/regression", R"({"x":[2,2,2],"y":[1,2,3]})")),
            "degenerate_x");
  EXPECT_EQ(post("/regression", R"({"x":[1,2,3],"y":[1,2,4],"extra":1})").status,
            422);
}

TEST(Errors, PayloadCap) {
  service::Limits small;
  small.max_body_bytes = 16;
  const auto r = post("/regression", R"({"x":[1,2,3],"y":[1,2,4]})", small);
  EXPECT_EQ(r.status, 413);
  EXPECT_EQ(error_code(r), "payload_too_large");
}

TEST(Errors, ObservationCap) {
  service::Limits small;
  small.max_observations = 3;
  const auto r = post("/regression", R"({"x":[1,2,3,4],"y":[1,2,4,3]})", small);
  EXPECT_EQ(r.status, 413);
  EXPECT_EQ(error_code(r), "payload_too_large");
  EXPECT_EQ(post("/regression", R"({"x":[1,2,3],"y":[1,2,4]})", small).status,
            200);
}

TEST(Errors, LimitsFromEnvironment) {
  ::setenv("STATLAB_MAX_BODY", "1234", 1);
  EXPECT_EQ(service::limits_from_env().max_body_bytes, 1234u);
  ::setenv("STATLAB_MAX_BODY", "junk", 1);
  EXPECT_EQ(service::limits_from_env().max_body_bytes,
            service::Limits{}.max_body_bytes);
  ::unsetenv("STATLAB_MAX_BODY");
}

TEST(Contract, ResponsesValidateAgainstSchemas) {
  statlab::testing::SchemaSet schemas(kSchemaDir);
  auto check = [&](const std::string& schema, const service::Response& r) {
    const auto errors = schemas.validate(schema, Json::parse(r.body));
    EXPECT_TRUE(errors.empty()) << schema << ": " << errors.front();
  };
  check("health.json", get("/health"));
  check("distributions.json", get("/distributions"));
  check("settings.json", get("/inference/settings"));
  check("probability.json",
        post("/probability", R"({"distribution":"poisson",
            "params":{"lambda":3},"query":{"type":"interval","a":1,"b":4}})"));
  check("inference.json",
        post("/inference/two_proportions",
             R"({"samples":[{"n":50,"successes":20},{"n":60,"successes":30}]})"));
  check("regression.json",
        post("/regression", R"({"x":[1,2,3,4,5],"y":[2,3,5,4,6]})"));
  check("error.json", post("/regression", "[]"));
}

TEST(Contract, Stateless) {
  const std::vector<std::pair<std::string, std::string>> calls{
      {"/probability", R"({"distribution":"gamma","params":{"shape":2,"rate":1},
          "query":{"type":"upper_tail","x":3}})"},
      {"/inference/one_variance", R"({"samples":[{"n":10,"var":4}],"h0":2})"},
      {"/regression", R"({"x":[1,2,3,4,5],"y":[2,3,5,4,6]})"},
      {"/inference/two_means_paired",
       R"({"samples":[{"data":[1,2,3,4]},{"data":[2,2,5,5]}]})"},
  };
  std::vector<std::string> first;
  for (const auto& [p, b] : calls) first.push_back(post(p, b).body);
  std::vector<std::size_t> order{3, 1, 0, 2};
  for (std::size_t i : order) {
    EXPECT_EQ(post(calls[i].first, calls[i].second).body, first[i]);
  }
}
