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

#include "pebms/axiom_checker.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "pebms/errors.hpp"
#include "pebms/fuzzer.hpp"

namespace pebms {
namespace {

FiniteSpace three_point_space() {
  const std::vector<double> xs{2, 3, 4};
  Matrix p(3, 20.0);
  Matrix theta(3);
  for (std::size_t i = 0; i < 3; ++i) {
    p(i, i) = 0.0;
    for (std::size_t j = 0; j < 3; ++j) theta(i, j) = 1.0 + xs[i] + xs[j];
  }
  return FiniteSpace({"2", "3", "4"}, p, theta, AxiomProfile::ebm(), xs);
}

FiniteSpace finite(const std::vector<std::vector<double>>& p,
                   std::optional<std::vector<std::vector<double>>> theta = std::nullopt) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < p.size(); ++i) labels.push_back(std::to_string(i));
  std::optional<Matrix> t;
  if (theta) t = Matrix::from_rows(*theta);
  return FiniteSpace(labels, Matrix::from_rows(p), t, AxiomProfile::pebm());
}

const ClauseEvaluation* find_clause(const AxiomReport& r, AxiomId id, std::vector<std::size_t> w) {
  for (const auto& c : r.record) {
    if (c.axiom == id && c.witness == w) return &c;
  }
  return nullptr;
}

// Independent oracle: the closed ratio form, in long double.
long double ratio_oracle(const Matrix& p, std::size_t i, std::size_t k) {
  long double best = 1.0L;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const long double num = static_cast<long double>(p(i, k)) + p(j, j);
    const long double den = static_cast<long double>(p(i, j)) + p(j, k);
    if (den > 0) best = std::max(best, num / den);
  }
  return best;
}

TEST(CheckAxiomsTest, ThreePointExtendedBMetricPasses) {
  const AxiomReport r = check_axioms(three_point_space(), AxiomProfile::ebm(), {0.0, true});
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.checks_by_axiom.at(AxiomId::kTriangle), 27u);
  EXPECT_EQ(r.checks_run, expected_check_count(3, AxiomProfile::ebm()));

  const ClauseEvaluation* c243 = find_clause(r, AxiomId::kTriangle, {0, 2, 1});
  const ClauseEvaluation* c234 = find_clause(r, AxiomId::kTriangle, {0, 1, 2});
  ASSERT_NE(c243, nullptr);
  ASSERT_NE(c234, nullptr);
  EXPECT_EQ(c243->coefficient, 6.0);
  EXPECT_EQ(c243->bracket, 40.0);
  EXPECT_EQ(c243->rhs, 240.0);
  EXPECT_EQ(c243->lhs, 20.0);
  EXPECT_EQ(c234->coefficient, 7.0);
  EXPECT_EQ(c234->rhs, 280.0);
  EXPECT_EQ(c234->lhs, 20.0);
}

TEST(CheckAxiomsTest, ThreePointAlsoPassesPartialProfile) {
  EXPECT_TRUE(check_axioms(three_point_space(), AxiomProfile::pebm()).passed);
}

TEST(CheckAxiomsTest, AsymmetricFormFailsSymmetryOnThreePoints) {
  const AnalyticSpace s({0, 1}, "abs(x-y)+x", "1");
  const AxiomReport r = check_axioms_sampled(s, 3, AxiomProfile::pebm());
  EXPECT_FALSE(r.passed);
  EXPECT_TRUE(r.grid_relative);
  const Violation* v = nullptr;
  for (const auto& x : r.violations) {
    if (x.axiom == AxiomId::kSymmetry && x.points == std::vector<double>{0.0, 1.0}) v = &x;
  }
  ASSERT_NE(v, nullptr);
  EXPECT_EQ(v->lhs, 1.0);
  EXPECT_EQ(v->rhs, 2.0);
  EXPECT_EQ(v->witness, (std::vector<std::size_t>{0, 2}));
  // First A3 violation in witness order is at indices (0,1): 0.5 vs 1.
  EXPECT_EQ(r.first(AxiomId::kSymmetry)->lhs, 0.5);
  EXPECT_EQ(r.first(AxiomId::kSymmetry)->rhs, 1.0);
}

TEST(CheckAxiomsTest, SinglePointPassesEveryProfile) {
  const FiniteSpace one({"a"}, Matrix(1, 0.0), Matrix(1, 1.0), AxiomProfile::pebm());
  for (const auto& prof : {AxiomProfile::metric(), AxiomProfile::b_metric(2), AxiomProfile::ebm(),
                           AxiomProfile::partial_metric(), AxiomProfile::pbm(2),
                           AxiomProfile::pebm()}) {
    const AxiomReport r = check_axioms(one, prof);
    EXPECT_TRUE(r.passed) << prof.tag();
    EXPECT_EQ(r.checks_run, expected_check_count(1, prof));
  }
}

TEST(CheckAxiomsTest, CountsMatchExpected) {
  for (std::size_t n = 2; n <= 6; ++n) {
    const FiniteSpace s = gen_space(n, 100 + n);
    for (const auto& prof : {AxiomProfile::ebm(), AxiomProfile::pebm(), AxiomProfile::metric()}) {
      const AxiomReport r = check_axioms(s, prof);
      EXPECT_EQ(r.checks_run, expected_check_count(n, prof));
      EXPECT_EQ(r.checks_by_axiom.at(AxiomId::kTriangle), n * n * n);
      EXPECT_EQ(r.checks_by_axiom.at(AxiomId::kSymmetry), n * n);
      EXPECT_EQ(r.checks_by_axiom.count(AxiomId::kSmallSelf), prof.is_partial() ? 1u : 0u);
    }
  }
}

TEST(CheckAxiomsTest, ControlProfileWithoutThetaIsConfigError) {
  const FiniteSpace s({"a", "b"}, Matrix::from_rows({{0, 1}, {1, 0}}), std::nullopt,
                      AxiomProfile::metric());
  EXPECT_THROW(check_axioms(s, AxiomProfile::ebm()), ConfigError);
  EXPECT_THROW(check_axioms(s, AxiomProfile::pebm()), ConfigError);
  EXPECT_TRUE(check_axioms(s, AxiomProfile::metric()).passed);
  EXPECT_TRUE(check_axioms(s, AxiomProfile::pbm(1)).passed);
}

TEST(CheckAxiomsTest, IndistancyBothDirections) {
  // Partial: equal self and cross distance for distinct points.
  const AxiomReport tie = check_axioms(finite({{1, 1}, {1, 1}}, {{{1, 1}, {1, 1}}}),
                                       AxiomProfile::pebm());
  ASSERT_NE(tie.first(AxiomId::kIndistancy), nullptr);
  EXPECT_EQ(tie.first(AxiomId::kIndistancy)->witness, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(tie.first(AxiomId::kIndistancy)->margin, 0.0);

  // Non-partial: nonzero self distance, zero cross distance.
  const AxiomReport self = check_axioms(finite({{0.5, 1}, {1, 0}}, {{{1, 1}, {1, 1}}}),
                                        AxiomProfile::ebm());
  EXPECT_EQ(self.first(AxiomId::kIndistancy)->witness, (std::vector<std::size_t>{0, 0}));
  const AxiomReport zero = check_axioms(finite({{0, 0}, {0, 0}}, {{{1, 1}, {1, 1}}}),
                                        AxiomProfile::ebm());
  EXPECT_EQ(zero.first(AxiomId::kIndistancy)->witness, (std::vector<std::size_t>{0, 1}));
}

TEST(CheckAxiomsTest, SmallSelfAndTriangle) {
  const AxiomReport a2 = check_axioms(finite({{2, 1}, {1, 0.5}}, {{{1, 1}, {1, 1}}}),
                                      AxiomProfile::pebm());
  const Violation* v = a2.first(AxiomId::kSmallSelf);
  ASSERT_NE(v, nullptr);
  EXPECT_EQ(v->witness, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(v->margin, -1.0);

  // p(0,2) = 5 > 1 * (1 + 1) - 0.
  const AxiomReport a4 = check_axioms(finite({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}},
                                             {{{1, 1, 1}, {1, 1, 1}, {1, 1, 1}}}),
                                      AxiomProfile::pebm());
  const Violation* t = a4.first(AxiomId::kTriangle);
  ASSERT_NE(t, nullptr);
  EXPECT_EQ(t->witness, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(t->lhs, 5.0);
  EXPECT_EQ(t->rhs, 2.0);
  EXPECT_EQ(t->margin, -3.0);
  EXPECT_EQ(a4.worst_margin, -3.0);
}

TEST(CheckAxiomsTest, SelfTermTightensTriangle) {
  // Triangle with p(y,y) subtracted fails even though the plain one holds.
  const auto s = finite({{0, 1, 2}, {1, 1, 1}, {2, 1, 0}}, {{{1, 1, 1}, {1, 1, 1}, {1, 1, 1}}});
  EXPECT_TRUE(check_axioms(s, AxiomProfile::b_metric(1)).first(AxiomId::kTriangle) == nullptr);
  const AxiomReport r = check_axioms(s, AxiomProfile::pebm());
  const Violation* v = r.first(AxiomId::kTriangle);
  ASSERT_NE(v, nullptr);
  EXPECT_EQ(v->witness, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(v->lhs, 3.0);
}

TEST(CheckAxiomsTest, ViolationsReplayAtWitness) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 4.0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + trial % 5;
    Matrix p(n);
    Matrix t(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) p(i, j) = u(rng);
      t(i, (i + 1) % n) = 1.0 + u(rng);
    }
    const FiniteSpace s(std::vector<std::string>(n, "p"), p, t, AxiomProfile::pebm());
    const AxiomReport r = check_axioms(s, AxiomProfile::pebm());
    EXPECT_EQ(r.passed, r.violations.empty());
    for (std::size_t i = 1; i < r.violations.size(); ++i) {
      EXPECT_LE(r.violations[i - 1].witness, r.violations[i].witness);
    }
    for (const auto& v : r.violations) {
      const ClauseEvaluation c = evaluate_clause(s, AxiomProfile::pebm(), v.axiom, v.witness);
      EXPECT_FALSE(c.holds);
      EXPECT_EQ(c.lhs, v.lhs);
      EXPECT_EQ(c.rhs, v.rhs);
      EXPECT_EQ(c.margin, v.margin);
      if (v.axiom == AxiomId::kTriangle || v.axiom == AxiomId::kSmallSelf) {
        EXPECT_LT(v.margin, 0.0);
      }
      if (v.axiom == AxiomId::kSymmetry) {
        EXPECT_GT(v.margin, 0.0);
      }
    }
  }
}

TEST(CheckAxiomsTest, ExactOnFiniteSlackOnGrids) {
  // One ulp above the bound: finite check is exact.
  const double over = std::nextafter(2.0, 3.0);
  const auto s = finite({{0, 1, over}, {1, 0, 1}, {over, 1, 0}}, {{{1, 1, 1}, {1, 1, 1}, {1, 1, 1}}});
  EXPECT_FALSE(check_axioms(s, AxiomProfile::pebm()).passed);
  CheckOptions slack;
  slack.inequality_tolerance = kGridInequalityTolerance;
  EXPECT_TRUE(check_axioms(s, AxiomProfile::pebm(), slack).passed);
}

TEST(SampledTest, GridPasses) {
  const AxiomReport mx = check_axioms_sampled(AnalyticSpace({0, 1}, "max(x,y)", "1+x+y"), 21,
                                              AxiomProfile::pebm());
  EXPECT_TRUE(mx.passed);
  EXPECT_TRUE(mx.grid_relative);
  EXPECT_EQ(mx.checks_by_axiom.at(AxiomId::kTriangle), 21u * 21u * 21u);

  const AnalyticSpace pw({0.5, 2.5}, "max(x,y)^b + abs(x-y)^b", "2^b", {{"b", 2.0}},
                         AxiomProfile::pbm(4));
  EXPECT_TRUE(check_axioms_sampled(pw, 17, AxiomProfile::pbm(4)).passed);

  const AnalyticSpace mn({0, 2}, "abs(x-y)+min(x,y)", "1+x+y");
  EXPECT_TRUE(check_axioms_sampled(mn, 21, AxiomProfile::pebm()).passed);
}

TEST(SampledTest, PowerFormNeedsItsCoefficient) {
  // With s = 1 the b = 2 form is not a partial metric.
  const AnalyticSpace pw({0.5, 2.5}, "max(x,y)^b + abs(x-y)^b", "2^b", {{"b", 2.0}});
  EXPECT_FALSE(check_axioms_sampled(pw, 17, AxiomProfile::partial_metric()).passed);
}

TEST(MinimalThetaTest, TriangleMetricGivesOnes) {
  Matrix p(5);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) p(i, j) = std::fabs(static_cast<double>(i) - j);
  }
  EXPECT_EQ(minimal_theta(p), Matrix(5, 1.0));
  EXPECT_EQ(minimal_theta(three_point_space().distances()), Matrix(3, 1.0));
}

TEST(MinimalThetaTest, MatchesRatioOracle) {
  for (std::uint64_t seed : {1u, 2u, 42u, 99u}) {
    const Matrix p = gen_space(7, seed).distances();
    const Matrix t = minimal_theta(p);
    for (std::size_t i = 0; i < 7; ++i) {
      for (std::size_t k = 0; k < 7; ++k) {
        const long double want = ratio_oracle(p, i, k);
        EXPECT_NEAR(static_cast<double>(t(i, k)), static_cast<double>(want),
                    4e-16 * static_cast<double>(want));
      }
    }
  }
}

TEST(MinimalThetaTest, PassesAndIsMinimal) {
  const Matrix p = gen_space(5, 42).distances();
  const Matrix t = minimal_theta(p);
  const FiniteSpace s(std::vector<std::string>(5, "q"), p, t, AxiomProfile::pebm());
  ASSERT_TRUE(check_axioms(s, AxiomProfile::pebm()).passed);
  std::size_t lowered = 0;
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t k = 0; k < 5; ++k) {
      if (!(t(i, k) > 1.0)) continue;
      Matrix lower = t;
      lower(i, k) = std::nextafter(t(i, k), 0.0);
      const AxiomReport r = check_axioms(s.with_control(lower), AxiomProfile::pebm());
      ASSERT_NE(r.first(AxiomId::kTriangle), nullptr) << i << "," << k;
      EXPECT_EQ(r.first(AxiomId::kTriangle)->witness.front(), i);
      EXPECT_EQ(r.first(AxiomId::kTriangle)->witness.back(), k);
      ++lowered;
    }
  }
  EXPECT_GT(lowered, 0u);
}

TEST(MinimalThetaTest, LargerThetaStillPasses) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> grow(1.0, 4.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const FiniteSpace s = gen_space(2 + seed % 6, seed);
    Matrix t = minimal_theta(s.distances());
    for (std::size_t i = 0; i < t.size(); ++i) {
      for (std::size_t j = 0; j < t.size(); ++j) t(i, j) *= grow(rng);
    }
    EXPECT_TRUE(check_axioms(s.with_control(t), AxiomProfile::pebm()).passed);
  }
}

TEST(MinimalThetaTest, Errors) {
  EXPECT_THROW(minimal_theta(Matrix::from_rows({{0, 1}, {2, 0}})), ArgumentError);
  EXPECT_THROW(minimal_theta(Matrix::from_rows({{3, 1}, {1, 0}})), ArgumentError);
  try {
    minimal_theta(Matrix::from_rows({{0, 0, 1}, {0, 0, 0}, {1, 0, 0}}));
    FAIL() << "expected infeasibility";
  } catch (const InfeasibleError& e) {
    EXPECT_NE(std::string(e.what()).find("(0,1,2)"), std::string::npos) << e.what();
  }
}

std::string status_of(const ReductionReport& r, const std::string& name) {
  for (const auto& o : r.implications) {
    if (o.name != name) continue;
    switch (o.status) {
      case ReductionOutcome::Status::kHolds: return "holds";
      case ReductionOutcome::Status::kBroken: return "broken";
      case ReductionOutcome::Status::kNotApplicable: return "n/a";
    }
  }
  return "missing";
}

TEST(ReductionsTest, ZeroSelfDistanceSpace) {
  const ReductionReport r = verify_reductions(three_point_space());
  EXPECT_TRUE(r.declared_profile_passes);
  EXPECT_TRUE(r.consistent());
  EXPECT_EQ(status_of(r, "ebm_implies_pebm"), "holds");
  EXPECT_EQ(status_of(r, "pebm_zero_diagonal_is_ebm"), "holds");
  EXPECT_EQ(status_of(r, "pebm_induced_is_ebm"), "holds");
  EXPECT_EQ(status_of(r, "pebm_constant_theta_is_pbm"), "n/a");
}

TEST(ReductionsTest, ConstantThetaGrid) {
  const FiniteSpace g = sample_grid(AnalyticSpace({0, 1}, "max(x,y)", "1+x+y"), 11);
  const FiniteSpace c = g.with_control(Matrix(11, 3.0));
  ASSERT_TRUE(check_axioms(c, AxiomProfile::pebm()).passed);
  const ReductionReport r = verify_reductions(c);
  EXPECT_EQ(status_of(r, "pebm_constant_theta_is_pbm"), "holds");
  EXPECT_TRUE(check_axioms(c, AxiomProfile::pbm(3)).passed);
  EXPECT_TRUE(r.consistent());
}

TEST(ReductionsTest, NonzeroDiagonalIsNotApplicable) {
  const FiniteSpace s = gen_space(5, 42);
  const ReductionReport r = verify_reductions(s);
  EXPECT_TRUE(r.declared_profile_passes);
  EXPECT_EQ(status_of(r, "pebm_zero_diagonal_is_ebm"), "n/a");
  EXPECT_EQ(status_of(r, "ebm_implies_pebm"), "n/a");
  EXPECT_EQ(status_of(r, "pebm_induced_is_ebm"), "holds");
  EXPECT_TRUE(r.consistent());
}

TEST(ReductionsTest, FailingSpaceReportsNotApplicable) {
  const FiniteSpace s = finite({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}, {{{1, 1, 1}, {1, 1, 1}, {1, 1, 1}}});
  const ReductionReport r = verify_reductions(s);
  EXPECT_FALSE(r.declared_profile_passes);
  EXPECT_EQ(status_of(r, "pebm_induced_is_ebm"), "n/a");
  EXPECT_TRUE(r.consistent());
}

TEST(JsonTest, ReportShape) {
  const FiniteSpace s = finite({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}, {{{1, 1, 1}, {1, 1, 1}, {1, 1, 1}}});
  const AxiomReport r = check_axioms(s, AxiomProfile::pebm());
  const nlohmann::json j = to_json(r);
  EXPECT_EQ(j["verdict"], "fail");
  EXPECT_EQ(j["profile"], "pebm");
  EXPECT_EQ(j["checks_run"], r.checks_run);
  EXPECT_EQ(j["grid_relative"], false);
  ASSERT_EQ(j["violations"].size(), r.violations.size());
  EXPECT_EQ(j["violations"][0]["axiom"], "A4_triangle");
  for (std::size_t i = 0; i < r.violations.size(); ++i) {
    EXPECT_EQ(violation_from_json(j["violations"][i]), r.violations[i]);
  }
  EXPECT_EQ(axiom_from_name("A2_small_self"), AxiomId::kSmallSelf);
}

}  // namespace
}  // namespace pebms
