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

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pebms/axiom_checker.hpp"
#include "pebms/core_spaces.hpp"
#include "pebms/fixed_point.hpp"
#include "pebms/sequence_diagnostics.hpp"

namespace pebms {

enum class ExpectedOutcome { kConfirms, kRefutes, kInconsistent };

std::string outcome_name(ExpectedOutcome o);

/// A published worked example, ready to run.
struct GalleryEntry {
  std::string id;
  AnySpace space;
  AxiomProfile profile;                  // profile the claim is about
  std::optional<AnyMap> map;
  std::optional<ContractionSpec> contraction;
  std::optional<double> start;           // x0 for the solver (analytic entries only)
  std::string claim;
  ExpectedOutcome expected = ExpectedOutcome::kConfirms;
  std::string notes;
};

/// Ids in report order.
const std::vector<std::string>& gallery_ids();

/// Throws LookupError listing the valid ids.
GalleryEntry build_example(const std::string& id);

/// Concrete evidence behind a refutation or an inconsistency, re-evaluated
/// from the closed forms after the run.
struct GalleryWitness {
  std::string what;
  std::vector<double> points;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool reverified = false;
};

struct GalleryResult {
  std::string id;
  ExpectedOutcome expected = ExpectedOutcome::kConfirms;
  ExpectedOutcome observed = ExpectedOutcome::kConfirms;
  bool matches = false;
  AxiomReport axioms;
  std::vector<GalleryWitness> witnesses;
  nlohmann::json diagnostics;  // entry-specific measurements
  std::string summary;
};

struct GalleryReport {
  std::size_t grid_n = 0;
  double tol = 0.0;
  std::vector<GalleryResult> results;  // in gallery_ids() order

  bool passed() const;
};

GalleryResult run_example(const GalleryEntry& entry, std::size_t grid_n, double tol);
GalleryReport run_gallery(std::size_t grid_n, double tol);

nlohmann::json to_json(const GalleryReport& report);
std::string to_text(const GalleryReport& report);

}  // namespace pebms
