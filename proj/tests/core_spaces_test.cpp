/*
 * Copyright 2026 The pebms Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "pebms/core_spaces.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "pebms/axiom_checker.hpp"
#include "pebms/errors.hpp"
#include "pebms/fuzzer.hpp"

namespace pebms {
namespace {

// X = {2,3,4}, 20 off the diagonal, theta = 1 + x + y.
FiniteSpace three_point_space() {
  const std::vector<double> xs{2, 3, 4};
  Matrix p(3, 20.0);
  Matrix theta(3);
  for (std::size_t i = 0; i < 3; ++i) {
    p(i, i) = 0.0;
    for (std::size_t j = 0; j < 3; ++j) theta(i, j) = 1.0 + xs[i] + xs[j];
  }
  return FiniteSpace({"2", "3", "4"}, p, theta, AxiomProfile::ebm());
}

std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

TEST(FiniteSpaceTest, EvaluatesStoredValues) {
  const FiniteSpace s = three_point_space();
  EXPECT_EQ(eval_p(s, 0, 1), 20.0);
  EXPECT_EQ(eval_p(s, 2, 2), 0.0);
  EXPECT_EQ(eval_theta(s, 0, 1), 6.0);
  EXPECT_EQ(eval_theta(s, 0, 2), 7.0);
  EXPECT_EQ(s.size(), 3u);
  EXPECT_EQ(s.labels()[2], "4");
}

TEST(FiniteSpaceTest, OutOfRangeNamesCoordinate) {
  const FiniteSpace s = three_point_space();
  EXPECT_THROW(s.p(3, 0), DomainError);
  EXPECT_NE(message_of([&] { s.p(0, 7); }).find("y"), std::string::npos);
  EXPECT_NE(message_of([&] { s.theta(9, 0); }).find("x"), std::string::npos);
}

TEST(FiniteSpaceTest, RejectsInvalidMatrices) {
  const Matrix ok = Matrix::from_rows({{0, 1}, {1, 0}});
  EXPECT_THROW(FiniteSpace({"a", "b"}, Matrix::from_rows({{0, -1}, {-1, 0}}), std::nullopt,
                           AxiomProfile::metric()),
               ConfigError);
  EXPECT_THROW(FiniteSpace({"a", "b"}, Matrix::from_rows({{0, NAN}, {1, 0}}), std::nullopt,
                           AxiomProfile::metric()),
               ConfigError);
  EXPECT_THROW(FiniteSpace({"a", "b"}, ok, Matrix::from_rows({{1, 0.5}, {1, 1}}),
                           AxiomProfile::pebm()),
               ConfigError);
  EXPECT_THROW(FiniteSpace({"a"}, ok, std::nullopt, AxiomProfile::metric()), ConfigError);
  EXPECT_THROW(FiniteSpace({"a", "b"}, ok, Matrix(3, 1.0), AxiomProfile::pebm()), ConfigError);
  EXPECT_THROW(Matrix::from_rows({{0, 1}, {1}}), ConfigError);
}

TEST(FiniteSpaceTest, ThetaWithoutMatrixIsConfigError) {
  const FiniteSpace s({"a", "b"}, Matrix::from_rows({{0, 1}, {1, 0}}), std::nullopt,
                      AxiomProfile::metric());
  EXPECT_THROW(s.theta(0, 1), ConfigError);
}

TEST(FiniteSpaceTest, SubspaceKeepsListedOrder) {
  const FiniteSpace s = three_point_space();
  const FiniteSpace sub = s.subspace({2, 0});
  ASSERT_EQ(sub.size(), 2u);
  EXPECT_EQ(sub.labels(), (std::vector<std::string>{"4", "2"}));
  EXPECT_EQ(sub.theta(0, 1), 7.0);
  EXPECT_EQ(sub.p(0, 1), 20.0);
}

TEST(AnalyticSpaceTest, EvaluatesClosedForms) {
  const AnalyticSpace max_space({0, 1}, "max(x,y)", "1+x+y");
  EXPECT_EQ(eval_p(max_space, 0.3, 0.3), 0.3);
  EXPECT_EQ(eval_theta(max_space, 0.5, 0.25), 1.75);

  const AnalyticSpace absx({0, 1}, "abs(x-y)+x", "1");
  EXPECT_EQ(eval_p(absx, 0.25, 0.75), 0.75);
  EXPECT_EQ(eval_theta(absx, 0.1, 0.9), 1.0);

  const AnalyticSpace kannan({0, 10}, "max(x,y)", "1 + x*y/(1+x+y)");
  EXPECT_EQ(eval_theta(kannan, 0.0, 5.0), 1.0);
}

TEST(AnalyticSpaceTest, OutOfDomainNamesCoordinate) {
  const AnalyticSpace s({0, 1}, "max(x,y)", "1+x+y");
  EXPECT_THROW(s.p(1.5, 0.0), DomainError);
  const std::string msg = message_of([&] { s.theta(0.5, -1.0); });
  EXPECT_NE(msg.find("y = -1"), std::string::npos) << msg;
}

TEST(AnalyticSpaceTest, ValidatesFormsOnSamples) {
  EXPECT_THROW(AnalyticSpace({0, 1}, "x-y", "1"), ConfigError);
  EXPECT_THROW(AnalyticSpace({0, 1}, "max(x,y)", "0.5"), ConfigError);
  EXPECT_THROW(AnalyticSpace({1, 0}, "max(x,y)", "1"), ConfigError);
  EXPECT_THROW(AnalyticSpace({0, 1}, "max(x,", "1"), ParseError);
}

TEST(GridTest, EndpointInclusive) {
  const auto two = grid_points({0, 1}, 2);
  EXPECT_EQ(two, (std::vector<double>{0.0, 1.0}));
  const auto pts = grid_points({0.1, 0.7}, 7);
  EXPECT_EQ(pts.front(), 0.1);
  EXPECT_EQ(pts.back(), 0.7);
  EXPECT_THROW(grid_points({0, 1}, 1), ArgumentError);
}

TEST(GridTest, SampleGridOfMax) {
  const AnalyticSpace s({0, 1}, "max(x,y)", "1+x+y");
  const FiniteSpace g = sample_grid(s, 3);
  EXPECT_EQ(g.coordinates(), (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_EQ(g.p(0, 1), 0.5);
  EXPECT_EQ(g.theta(1, 2), 2.5);
  EXPECT_EQ(g.labels(), (std::vector<std::string>{"0", "0.5", "1"}));
  EXPECT_THROW(sample_grid(s, 1), ArgumentError);
}

TEST(GridTest, SampleGridOfPowerForm) {
  const AnalyticSpace s({0.5, 2.5}, "max(x,y)^b + abs(x-y)^b", "2^b", {{"b", 2.0}},
                        AxiomProfile::pbm(4));
  const FiniteSpace g = sample_grid(s, 5);
  const std::vector<double> xs{0.5, 1.0, 1.5, 2.0, 2.5};
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      const double m = std::max(xs[i], xs[j]);
      const double d = xs[i] - xs[j];
      EXPECT_DOUBLE_EQ(g.p(i, j), m * m + d * d);
      EXPECT_EQ(g.theta(i, j), 4.0);
    }
  }
}

TEST(GridTest, SamplingIsBitIdentical) {
  const AnalyticSpace s({0, 2}, "abs(x-y)+min(x,y)", "1+x+y");
  EXPECT_EQ(sample_grid(s, 23), sample_grid(s, 23));
}

TEST(InducedTest, ZeroDiagonalSameOffDiagonal) {
  const AnalyticSpace s({0, 1}, "max(x,y)", "1+x+y");
  const FiniteSpace g = sample_grid(s, 11);
  const FiniteSpace d = induced_ebm(g);
  EXPECT_EQ(d.declared(), AxiomProfile::ebm());
  EXPECT_EQ(d.control(), g.control());
  EXPECT_EQ(d.labels(), g.labels());
  for (std::size_t i = 0; i < 11; ++i) {
    EXPECT_EQ(d.p(i, i), 0.0);
    for (std::size_t j = 0; j < 11; ++j) {
      if (i != j) EXPECT_EQ(d.p(i, j), std::max(i, j) / 10.0);
    }
  }
}

TEST(InducedTest, GeneratedSpaceInducesExtendedBMetric) {
  const FiniteSpace s = gen_space(6, 42);
  ASSERT_TRUE(check_axioms(s, AxiomProfile::pebm()).passed);
  EXPECT_TRUE(check_axioms(induced_ebm(s), AxiomProfile::ebm()).passed);
}

TEST(ProfileTest, Tags) {
  EXPECT_EQ(AxiomProfile::from_tag("pebm"), AxiomProfile::pebm());
  EXPECT_EQ(AxiomProfile::from_tag("pbm", 4.0), AxiomProfile::pbm(4.0));
  EXPECT_EQ(AxiomProfile::from_tag("b_metric", 2.0).constant_coefficient(), 2.0);
  EXPECT_THROW(AxiomProfile::from_tag("pbm"), ConfigError);
  EXPECT_THROW(AxiomProfile::from_tag("quasi"), ConfigError);
  EXPECT_THROW(AxiomProfile::pbm(0.5), ArgumentError);
  for (const char* tag : {"metric", "ebm", "partial_metric", "pebm"}) {
    EXPECT_EQ(AxiomProfile::from_tag(tag).tag(), tag);
  }
  EXPECT_TRUE(AxiomProfile::pebm().is_partial());
  EXPECT_FALSE(AxiomProfile::ebm().is_partial());
  EXPECT_TRUE(AxiomProfile::ebm().uses_control_matrix());
  EXPECT_FALSE(AxiomProfile::pbm(3).uses_control_matrix());
}

TEST(JsonTest, FiniteRoundTripIsBitExact) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  Matrix p(4);
  Matrix theta(4, 1.0);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) p(i, j) = p(j, i) = u(rng);
    theta(i, (i + 1) % 4) = 1.0 + u(rng);
  }
  const FiniteSpace s({"a", "b", "c", "d"}, p, theta, AxiomProfile::pbm(2.5));
  const std::string text = space_to_json(s).dump();
  const AnySpace back = space_from_json(nlohmann::json::parse(text));
  ASSERT_TRUE(std::holds_alternative<FiniteSpace>(back));
  EXPECT_EQ(std::get<FiniteSpace>(back), s);
}

TEST(JsonTest, SampledCoordinatesSurvive) {
  const FiniteSpace g = sample_grid(AnalyticSpace({0, 1}, "max(x,y)", "1+x+y"), 7);
  EXPECT_EQ(std::get<FiniteSpace>(space_from_json(space_to_json(g))), g);
}

TEST(JsonTest, AnalyticRoundTrip) {
  const AnalyticSpace s({0.5, 2.5}, "max(x,y)^b + abs(x-y)^b", "2^b", {{"b", 2.0}},
                        AxiomProfile::pbm(4));
  const nlohmann::json j = space_to_json(s);
  EXPECT_EQ(j["kind"], "analytic");
  EXPECT_EQ(j["s"], 4.0);
  const auto back = std::get<AnalyticSpace>(space_from_json(j));
  EXPECT_EQ(back.domain(), s.domain());
  EXPECT_EQ(back.p_form(), s.p_form());
  EXPECT_EQ(back.params(), s.params());
  EXPECT_EQ(back.declared(), s.declared());
  EXPECT_EQ(back.p(1.0, 2.0), s.p(1.0, 2.0));
}

TEST(JsonTest, SchemaProblemsAreConfigErrors) {
  using nlohmann::json;
  EXPECT_THROW(space_from_json(json{{"kind", "finite"}}), ConfigError);
  EXPECT_THROW(space_from_json(json{{"kind", "torus"}}), ConfigError);
  EXPECT_THROW(space_from_json(json{{"kind", "finite"}, {"P", "nope"}}), ConfigError);
  EXPECT_THROW(space_from_json(json{{"kind", "analytic"}, {"domain", {0, 1, 2}},
                                    {"p_form", "x"}, {"theta_form", "1"}}),
               ConfigError);
}

TEST(JsonTest, NumericLabelsAndDefaults) {
  const auto j = nlohmann::json::parse(
      R"({"kind":"finite","labels":[2,3],"P":[[0,1],[1,0]],"Theta":[[1,1],[1,1]]})");
  const auto s = std::get<FiniteSpace>(space_from_json(j));
  EXPECT_EQ(s.labels(), (std::vector<std::string>{"2", "3"}));
  EXPECT_EQ(s.declared(), AxiomProfile::pebm());
}

TEST(FormatTest, ShortestRoundTrip) {
  EXPECT_EQ(format_real(0.1), "0.1");
  EXPECT_EQ(format_real(240.0), "240");
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 200; ++i) {
    const double v = u(rng);
    EXPECT_EQ(std::stod(format_real(v)), v);
  }
}

}  // namespace
}  // namespace pebms
