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

#include "statlab/narrative.hpp"

#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "html_check.hpp"
#include "statlab/inference.hpp"
#include "statlab/probability.hpp"

namespace dist = statlab::dist;
namespace inf = statlab::inference;
namespace nar = statlab::narrative;
namespace reg = statlab::regression;
using statlab::DerivationDocument;
using statlab::StepKind;

namespace {

bool contains(const std::string& s, std::string_view needle) {
  return s.find(needle) != std::string::npos;
}

// Every display must be reproducible from its template and values alone.
void expect_faithful(const DerivationDocument& doc) {
  for (const auto& section : doc.sections) {
    for (const auto& step : section.steps) {
      const auto again =
          statlab::make_step(step.tex_template, step.values, step.kind);
      EXPECT_EQ(again.display, step.display) << step.tex_template;
      EXPECT_FALSE(contains(step.display, "{{")) << step.display;
    }
  }
}

inf::InferenceRequest one_mean(inf::Alternative alt) {
  inf::InferenceRequest r;
  r.setting = inf::Setting::kOneMean;
  r.samples = {inf::MeanSummary{25, 10.4, 4.0, std::nullopt}};
  r.config.h0 = 10;
  r.config.alternative = alt;
  return r;
}

reg::RegressionInput hours_scores() {
  reg::RegressionInput in;
  in.x = {1, 2, 3, 4, 5, 6};
  in.y = {52, 55, 61, 60, 68, 71};
  in.x_label = "hours";
  in.y_label = "score";
  return in;
}

}  // namespace

TEST(DistributionDocument, NormalSolution) {
  const auto r = dist::probability(dist::Distribution::normal(0, 1),
                                   dist::ProbabilityQuery::lower_tail(1));
  const auto& doc = r.derivation;
  ASSERT_EQ(doc.sections.size(), 2u);
  EXPECT_EQ(doc.sections[0].title, "Solution");
  EXPECT_EQ(doc.sections[1].title, "Details");
  ASSERT_EQ(doc.sections[0].steps.size(), 2u);
  EXPECT_TRUE(contains(doc.sections[0].steps[1].display, "0.8413"));
  EXPECT_TRUE(contains(doc.sections[0].steps[1].display, "X \\leq 1"));
  EXPECT_EQ(doc.sections[1].steps.size(), 4u);
  expect_faithful(doc);
}

TEST(DistributionDocument, QueryKinds) {
  const auto model = dist::Distribution::normal(0, 1);
  const auto up = dist::probability(model, dist::ProbabilityQuery::upper_tail(1));
  EXPECT_TRUE(contains(up.derivation.sections[0].steps[1].display, "0.1587"));
  const auto iv =
      dist::probability(model, dist::ProbabilityQuery::interval(-1, 1));
  EXPECT_TRUE(contains(iv.derivation.sections[0].steps[1].display, "0.6827"));
}

TEST(DistributionDocument, UndefinedMoments) {
  const auto r = dist::probability(dist::Distribution::cauchy(0, 1),
                                   dist::ProbabilityQuery::lower_tail(0));
  const auto& details = r.derivation.sections[1].steps;
  EXPECT_TRUE(contains(details[1].display, "undefined"));
  EXPECT_TRUE(contains(details[3].display, "undefined"));
}

TEST(DistributionDocument, PoissonTemplateBindsLambda) {
  const auto r = dist::probability(dist::Distribution::poisson(3.5),
                                   dist::ProbabilityQuery::lower_tail(2));
  const auto& pmf = r.derivation.sections[1].steps[0];
  EXPECT_TRUE(contains(pmf.tex_template, "{{lambda}}"));
  ASSERT_EQ(pmf.values.count("lambda"), 1u);
  EXPECT_DOUBLE_EQ(pmf.values.at("lambda"), 3.5);
  EXPECT_TRUE(contains(pmf.display, "3.5"));
}

TEST(DistributionDocument, EveryFamilyIsFaithful) {
  const std::vector<dist::Distribution> models{
      dist::Distribution::normal(1, 2),
      dist::Distribution::student_t(5),
      dist::Distribution::chi_square(3),
      dist::Distribution::fisher(4, 9),
      dist::Distribution::exponential(0.5),
      dist::Distribution::gamma(2, 3),
      dist::Distribution::beta(2, 5),
      dist::Distribution::binomial(10, 0.3),
      dist::Distribution::poisson(4),
  };
  for (const auto& m : models) {
    const auto r = dist::probability(m, dist::ProbabilityQuery::lower_tail(0.5));
    ASSERT_EQ(r.derivation.sections.size(), 2u);
    expect_faithful(r.derivation);
  }
}

TEST(TestDocument, FourSectionsFourSteps) {
  for (auto alt : {inf::Alternative::kTwoSided, inf::Alternative::kLess,
                   inf::Alternative::kGreater}) {
    const auto r = inf::run_test(one_mean(alt));
    const auto& doc = r.narrative;
    ASSERT_EQ(doc.sections.size(), 4u);
    EXPECT_EQ(doc.sections[0].title, "Data");
    EXPECT_EQ(doc.sections[1].title, "Confidence interval");
    EXPECT_EQ(doc.sections[2].title, "Hypothesis test");
    EXPECT_EQ(doc.sections[3].title, "Interpretation");
    EXPECT_EQ(doc.sections[2].steps.size(), 4u);
    expect_faithful(doc);
  }
}

TEST(TestDocument, OneMeanIntervalTemplate) {
  const auto r = inf::run_test(one_mean(inf::Alternative::kTwoSided));
  const auto& ci = r.narrative.sections[1].steps.back();
  EXPECT_TRUE(contains(ci.tex_template, "\\bar{x} \\pm (t_{"));
  EXPECT_TRUE(contains(ci.tex_template, "\\frac{s}{\\sqrt{n}}") ||
              contains(ci.tex_template, "s/\\sqrt{n}"))
      << ci.tex_template;
  EXPECT_TRUE(contains(ci.display, "[" + statlab::format_compact(r.ci.lower)));
}

TEST(TestDocument, OneSidedGreaterIsOpenAbove) {
  const auto r = inf::run_test(one_mean(inf::Alternative::kGreater));
  const auto& ci = r.narrative.sections[1].steps.back();
  EXPECT_TRUE(contains(ci.display, "+\\infty)"));
  const auto less = inf::run_test(one_mean(inf::Alternative::kLess));
  EXPECT_TRUE(contains(less.narrative.sections[1].steps.back().display,
                       "(-\\infty;"));
}

TEST(TestDocument, InterpretationCarriesPValue) {
  const auto r = inf::run_test(one_mean(inf::Alternative::kTwoSided));
  const auto& step = r.narrative.sections[3].steps.front();
  EXPECT_EQ(step.kind, StepKind::kText);
  ASSERT_EQ(step.values.count("p"), 1u) << step.tex_template;
  EXPECT_DOUBLE_EQ(step.values.at("p"), r.p_value);
}

TEST(TestDocument, Deterministic) {
  const auto a = inf::run_test(one_mean(inf::Alternative::kLess));
  const auto b = inf::run_test(one_mean(inf::Alternative::kLess));
  ASSERT_EQ(a.narrative.sections.size(), b.narrative.sections.size());
  for (std::size_t i = 0; i < a.narrative.sections.size(); ++i) {
    const auto& sa = a.narrative.sections[i].steps;
    const auto& sb = b.narrative.sections[i].steps;
    ASSERT_EQ(sa.size(), sb.size());
    for (std::size_t j = 0; j < sa.size(); ++j) {
      EXPECT_EQ(sa[j].display, sb[j].display);
    }
  }
}

TEST(Report, WellFormedWithReplay) {
  nar::ReportRequest req{hours_scores(), true, ""};
  const std::string html = nar::regression_report(req);
  std::string why;
  EXPECT_TRUE(statlab::testing::well_formed_html(html, &why)) << why;
  EXPECT_TRUE(contains(html, "id=\"derivation\""));
  EXPECT_TRUE(contains(html, "<svg"));
  EXPECT_EQ(statlab::testing::replay_payload(html),
            nar::detail::default_replay(req));
  EXPECT_EQ(html, nar::regression_report(req));
}

TEST(Report, StepsCanBeHidden) {
  const std::string html =
      nar::regression_report({hours_scores(), false, ""});
  EXPECT_FALSE(contains(html, "id=\"derivation\""));
  EXPECT_FALSE(contains(html, "Step-by-step"));
}

TEST(Report, NumbersMatchFit) {
  const auto in = hours_scores();
  const auto f = reg::fit(in);
  const std::string html = nar::regression_report({in, true, ""});
  EXPECT_TRUE(contains(html, statlab::format_fixed4(f.beta1)));
  EXPECT_TRUE(contains(html, statlab::format_fixed4(f.beta0)));
  EXPECT_TRUE(contains(html, statlab::format_fixed4(f.r_squared)));
  EXPECT_TRUE(contains(html, "hours"));
}

TEST(Report, VerbatimReplayIsScriptSafe) {
  const std::string payload = R"({"x_label":"</script><b>&"})";
  const std::string html =
      nar::regression_report({hours_scores(), true, payload});
  std::string why;
  EXPECT_TRUE(statlab::testing::well_formed_html(html, &why)) << why;
  const std::string embedded = statlab::testing::replay_payload(html);
  EXPECT_FALSE(contains(embedded, "<"));
  EXPECT_EQ(embedded,
            R"({"x_label":"\u003c/script\u003e\u003cb\u003e\u0026"})");
}

TEST(Report, HostileLabelsAreEscaped) {
  auto in = hours_scores();
  in.x_label = "<i>h</i>";
  const std::string html = nar::regression_report({in, true, ""});
  std::string why;
  EXPECT_TRUE(statlab::testing::well_formed_html(html, &why)) << why;
  EXPECT_TRUE(contains(html, "&lt;i&gt;h&lt;/i&gt;"));
}

TEST(Report, TinyPValueIsEscaped) {
  // The intercept p-value here is below 0.0001.
  const std::string html = nar::regression_report({hours_scores(), true, ""});
  EXPECT_TRUE(contains(html, "<td>&lt; 0.0001</td>"));
}

TEST(Report, DegenerateFitStillRenders) {
  reg::RegressionInput in;
  in.x = {1, 2, 3};
  in.y = {2, 4, 6};
  const std::string html = nar::regression_report({in, true, ""});
  EXPECT_TRUE(contains(html, "residual diagnostics are not defined"));
  EXPECT_TRUE(contains(html, "NA"));
}

TEST(PlainText, StripsMarkup) {
  EXPECT_EQ(nar::tex_to_plain("\\frac{a}{b}"), "a/b");
  EXPECT_FALSE(contains(nar::tex_to_plain("\\bar{x} \\pm 2"), "\\"));
}
