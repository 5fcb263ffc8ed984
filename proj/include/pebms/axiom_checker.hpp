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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "pebms/core_spaces.hpp"

namespace pebms {

enum class AxiomId {
  kIndistancy,  // A1: p(x,x)=p(x,y)=p(y,y) iff x=y  (d(x,y)=0 iff x=y for non-partial)
  kSmallSelf,   // A2: p(x,x) <= p(x,y)
  kSymmetry,    // A3: p(x,y) = p(y,x)
  kTriangle,    // A4: p(x,z) <= c(x,z)[p(x,y)+p(y,z)] - p(y,y)
};

std::string axiom_name(AxiomId id);
AxiomId axiom_from_name(const std::string& name);

/// Absolute tolerance used to detect the three-way equality of A1 for x != y.
inline constexpr double kIndistancyTolerance = 1e-12;
/// Absolute tolerance for equality clauses on sampled analytic grids.
inline constexpr double kGridEqualityTolerance = 1e-12;

/// Relative slack for inequality clauses on sampled analytic grids, where closed
/// forms such as |x-y| + min(x,y) round a few ulps away from max(x,y).
inline constexpr double kGridInequalityTolerance = 1e-12;

/// One evaluated axiom clause.
///
/// For A4 the self-distance term is moved to the left, so lhs = p(x,z) + p(y,y)
/// and rhs = coefficient * bracket with bracket = p(x,y) + p(y,z). This keeps the
/// degenerate triples (x,x,z), (x,z,z) exact in floating point.
///
/// margin is rhs - lhs for the inequality clauses (A2, A4). For A3 and for the
/// diagonal half of non-partial A1 it is |lhs - rhs|. For the off-diagonal half
/// of A1 it is the largest pairwise gap among p(x,x), p(x,y), p(y,y), so a
/// violation there has margin <= kIndistancyTolerance.
struct ClauseEvaluation {
  AxiomId axiom = AxiomId::kTriangle;
  std::vector<std::size_t> witness;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool holds = true;
  double coefficient = 1.0;  // A4 only
  double bracket = 0.0;      // A4 only
  double self_term = 0.0;    // A4 only
};

struct Violation {
  AxiomId axiom = AxiomId::kTriangle;
  std::vector<std::size_t> witness;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  std::vector<double> points;  // witness coordinates when the space was sampled

  bool operator==(const Violation&) const = default;
};

struct AxiomReport {
  AxiomProfile profile;
  bool passed = true;
  std::size_t checks_run = 0;
  std::map<AxiomId, std::size_t> checks_by_axiom;
  std::vector<Violation> violations;  // sorted by witness, then axiom
  double worst_margin = 0.0;          // smallest inequality margin seen
  bool grid_relative = false;         // pass is evidence on a grid, not a proof
  std::vector<ClauseEvaluation> record;  // every clause, when requested

  /// First violation of the given axiom, or nullptr.
  const Violation* first(AxiomId id) const;
};

struct CheckOptions {
  /// Tolerance for A3 and the diagonal half of non-partial A1; 0 means exact.
  double equality_tolerance = 0.0;
  /// Keep every evaluated clause in AxiomReport::record.
  bool record_checks = false;
  /// Relative slack for A2 and A4: lhs <= rhs + tol * max(|lhs|, |rhs|). 0 means exact.
  double inequality_tolerance = 0.0;
};

/// Evaluates a single clause at `witness` (2 indices for A1-A3, 3 for A4).
/// Throws ConfigError when the profile needs Theta and the space has none.
ClauseEvaluation evaluate_clause(const FiniteSpace& space, const AxiomProfile& profile,
                                 AxiomId axiom, std::span<const std::size_t> witness,
                                 double equality_tolerance = 0.0,
                                 double inequality_tolerance = 0.0);

/// Number of clause evaluations check_axioms performs on an n-point space.
std::size_t expected_check_count(std::size_t n, const AxiomProfile& profile);

/// Exhaustive check over all ordered pairs and ordered triples, degenerate ones
/// included.
AxiomReport check_axioms(const FiniteSpace& space, const AxiomProfile& profile,
                         const CheckOptions& options = {});

/// check_axioms on sample_grid(space, n) with the grid tolerances; grid_relative is set.
AxiomReport check_axioms_sampled(const AnalyticSpace& space, std::size_t n,
                                 const AxiomProfile& profile);

/// Pointwise smallest control matrix making P satisfy A4 (with the -p(y,y) term),
/// floored at 1. Entries are the smallest doubles for which the checker's own
/// floating-point comparison holds.
///
/// Requires P square, nonnegative, symmetric, with P(i,i) <= P(i,j); throws
/// ArgumentError otherwise and InfeasibleError when a triple has a zero bracket
/// but a positive left side.
Matrix minimal_theta(const Matrix& distances);

struct ReductionOutcome {
  enum class Status { kHolds, kBroken, kNotApplicable };

  std::string name;
  Status status = Status::kNotApplicable;
  std::string detail;
};

struct ReductionReport {
  bool declared_profile_passes = false;
  std::vector<ReductionOutcome> implications;

  /// No implication whose premise held was broken.
  bool consistent() const;
};

/// Checks the profile implication lattice on one space:
///   ebm => pebm, pebm => induced_ebm is ebm, pebm with zero diagonal => ebm,
///   pebm with constant Theta = s => pbm(s), b_metric(s) => pbm(s),
///   partial_metric => pbm(1).
/// Implications whose premise fails are reported as not applicable.
ReductionReport verify_reductions(const FiniteSpace& space);

nlohmann::json to_json(const Violation& v);
Violation violation_from_json(const nlohmann::json& j);
nlohmann::json to_json(const AxiomReport& report);
nlohmann::json to_json(const ReductionReport& report);

}  // namespace pebms
