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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pebms/axiom_checker.hpp"
#include "pebms/core_spaces.hpp"

namespace pebms {

/// Generator identity: std::mt19937_64 seeded with the trial seed, doubles
/// built from the top 53 bits of each draw. Trial seeds are splitmix64 of
/// (campaign seed + golden-ratio increment * (trial + 1)).
std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t trial_seed(std::uint64_t campaign_seed, std::size_t trial) noexcept;

struct FuzzConfig {
  std::size_t n_min = 2;
  std::size_t n_max = 8;
  std::size_t trials = 500;
  std::uint64_t seed = 42;
  AxiomProfile profile = AxiomProfile::pebm();
  double mutation_factor = 0.9;
  std::size_t keep_counterexamples = 5;  // shrunk mutation counterexamples kept

  /// Throws ArgumentError on trials < 1, n_min < 2, n_max < n_min or a factor
  /// outside (0, 1).
  void validate() const;
};

/// Random n-point space that satisfies the partial extended b-metric axioms by
/// construction. Off-diagonal entries are U[0.1, 10] and symmetric, P(i,i) is
/// U[0, 0.9) times the row's off-diagonal minimum, and Theta is
/// minimal_theta(P) times one factor drawn from U[1, 3].
FiniteSpace gen_space(std::size_t n, std::uint64_t seed);

struct Mutation {
  FiniteSpace space;
  std::array<std::size_t, 3> triple{};  // (x, y, z) of the tightest A4 clause
  double margin = 0.0;                  // its margin before the mutation
  double old_theta = 1.0;
  double new_theta = 1.0;               // max(1, factor * old_theta)
};

/// Scales Theta(x,z) at the tightest A4 triple by `factor`, clamped at 1.
/// Candidates are triples with a positive bracket, Theta(x,z) > 1 and a
/// nonnegative margin; the smallest margin wins, ties by witness order.
/// nullopt when there is no candidate (the mutation is impossible).
std::optional<Mutation> mutate_theta(const FiniteSpace& space, double factor);

/// Greedily removes points while `profile` still reports a violation of
/// `axiom`. Stops at the axiom's arity (3 for A4, 2 otherwise).
FiniteSpace shrink(const FiniteSpace& space, const AxiomProfile& profile, AxiomId axiom);

struct CounterexampleReport {
  FiniteSpace space;
  Violation violation;  // first violation of its axiom on `space`
  bool shrunk = false;
  std::uint64_t generation_seed = 0;
  std::size_t trial = 0;
  std::string origin;   // "generator" or "mutation"
};

struct FuzzAnomaly {
  std::size_t trial = 0;
  std::uint64_t generation_seed = 0;
  std::string kind;  // "generated_space_failed", "mutation_undetected"
  std::string detail;
};

struct FuzzStats {
  FuzzConfig config;
  std::size_t generated_passed = 0;
  std::size_t generated_failed = 0;
  std::size_t mutations_possible = 0;
  std::size_t mutations_impossible = 0;
  std::size_t mutations_detected = 0;
  std::size_t mutations_undetected = 0;
  // Same mutation applied to the inflated Theta as generated; informational.
  std::size_t inflated_mutations_detected = 0;
  std::size_t checks_run = 0;
  std::vector<FuzzAnomaly> anomalies;
  std::vector<CounterexampleReport> counterexamples;

  /// No generator/checker inconsistency.
  bool consistent() const noexcept { return generated_failed == 0 && mutations_undetected == 0; }
};

/// Runs config.trials independent trials. Each trial draws n and the space from
/// its own trial seed, checks it, then mutates the minimal-Theta counterpart
/// (P, minimal_theta(P)) and expects an A4 violation.
FuzzStats fuzz_campaign(const FuzzConfig& config);

nlohmann::json to_json(const FuzzConfig& config);
nlohmann::json to_json(const CounterexampleReport& report);
nlohmann::json to_json(const FuzzStats& stats);

}  // namespace pebms
