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

#include "pebms/examples_gallery.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "pebms/errors.hpp"

namespace pebms {
namespace {

const GalleryResult& find(const GalleryReport& report, const std::string& id) {
  for (const auto& r : report.results) {
    if (r.id == id) return r;
  }
  throw LookupError(id);
}

TEST(GalleryTest, IdsInReportOrder) {
  const std::vector<std::string> want{"ebm_235",   "pbm_213",     "pebm_absx",
                                      "pebm_max",  "pebm_min",    "pebm_kannan",
                                      "pebm_kannan_unbounded"};
  EXPECT_EQ(gallery_ids(), want);
  for (const auto& id : want) EXPECT_EQ(build_example(id).id, id);
  EXPECT_THROW(build_example("nope"), LookupError);
}

TEST(GalleryTest, EntryShapes) {
  const auto absx = build_example("pebm_absx");
  EXPECT_EQ(absx.expected, ExpectedOutcome::kRefutes);
  ASSERT_TRUE(absx.map.has_value());
  ASSERT_TRUE(absx.contraction.has_value());
  EXPECT_EQ(absx.contraction->family, ContractionFamily::kModifiedKannan);
  EXPECT_FALSE(build_example("pebm_max").map.has_value());
  EXPECT_EQ(build_example("pebm_min").expected, ExpectedOutcome::kInconsistent);
  EXPECT_EQ(build_example("ebm_235").profile.tag(), "ebm");
  EXPECT_TRUE(std::holds_alternative<FiniteSpace>(build_example("ebm_235").space));
}

class GalleryGridTest : public ::testing::TestWithParam<std::size_t> {};

TEST_P(GalleryGridTest, EveryEntryMatches) {
  const auto report = run_gallery(GetParam(), 1e-9);
  ASSERT_EQ(report.results.size(), gallery_ids().size());
  for (const auto& r : report.results) {
    EXPECT_TRUE(r.matches) << r.id << ": " << r.summary;
    EXPECT_EQ(r.expected, r.observed) << r.id;
  }
  EXPECT_TRUE(report.passed());
}

INSTANTIATE_TEST_SUITE_P(Grids, GalleryGridTest, ::testing::Values(11, 21, 41, 81));

TEST(GalleryTest, RefutationsCarryReverifiedWitnesses) {
  const auto report = run_gallery(41, 1e-9);
  for (const auto& r : report.results) {
    if (r.expected == ExpectedOutcome::kConfirms) continue;
    ASSERT_FALSE(r.witnesses.empty()) << r.id;
    for (const auto& w : r.witnesses) EXPECT_TRUE(w.reverified) << r.id << " " << w.what;
  }
}

TEST(GalleryTest, FiniteEntryProducts) {
  const auto r = run_example(build_example("ebm_235"), 41, 1e-9);
  EXPECT_EQ(r.diagnostics["triangle_checks"], 27);
  EXPECT_EQ(r.diagnostics["triple_2_4_3"]["rhs"], 240.0);
  EXPECT_EQ(r.diagnostics["triple_2_3_4"]["rhs"], 280.0);
  EXPECT_EQ(r.diagnostics["triple_2_4_3"]["coefficient"], 6.0);
  EXPECT_EQ(r.diagnostics["triple_2_3_4"]["bracket"], 40.0);
  EXPECT_TRUE(r.diagnostics["products_match"].get<bool>());
}

TEST(GalleryTest, AsymmetricWitnessAtEndpoints) {
  const auto r = run_example(build_example("pebm_absx"), 41, 1e-9);
  ASSERT_EQ(r.witnesses.size(), 1u);
  const auto& w = r.witnesses[0];
  EXPECT_EQ(w.points, (std::vector<double>{0.0, 1.0}));
  EXPECT_EQ(w.lhs, 1.0);  // p(0,1) = |0-1| + 0
  EXPECT_EQ(w.rhs, 2.0);  // p(1,0) = |1-0| + 1
  EXPECT_EQ(r.diagnostics["variant_theta_1_plus_x_plus_y"]["verdict"], "fail");
  EXPECT_TRUE(r.diagnostics["solve"]["converged"].get<bool>());
}

TEST(GalleryTest, UnboundedThreshold) {
  const auto r = run_example(build_example("pebm_kannan_unbounded"), 41, 1e-9);
  const double x = r.diagnostics["threshold_x"].get<double>();
  // theta(x/4, x) = 1 + (x^2/4)/(1 + 5x/4) equals 3 there.
  EXPECT_NEAR(1.0 + (x * x / 4.0) / (1.0 + 1.25 * x), 3.0, 1e-12);
  EXPECT_GT(x, 1.0);
  EXPECT_LT(x, 100.0);
  ASSERT_FALSE(r.witnesses.empty());
  EXPECT_GE(r.witnesses[0].points[0], x);
}

TEST(GalleryTest, InconsistencyDiagnostics) {
  const auto r = run_example(build_example("pebm_min"), 41, 1e-9);
  EXPECT_LE(r.diagnostics["zero_cauchy_tail"].get<double>(), 1e-5);
  EXPECT_TRUE(r.diagnostics["limit_in_stated_domain"].get<bool>());
  EXPECT_EQ(r.diagnostics["limit_self_distance"].get<double>(), 0.0);
}

TEST(GalleryTest, Deterministic) {
  const auto a = to_json(run_gallery(21, 1e-9)).dump();
  const auto b = to_json(run_gallery(21, 1e-9)).dump();
  EXPECT_EQ(a, b);
  const std::string text = to_text(run_gallery(21, 1e-9));
  EXPECT_NE(text.find("gallery: pass"), std::string::npos);
  EXPECT_NE(text.find("pebm_kannan_unbounded"), std::string::npos);
}

}  // namespace
}  // namespace pebms
