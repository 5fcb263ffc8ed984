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

#include "pebms/fuzzer.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "pebms/errors.hpp"
#include "pebms/fixed_point.hpp"

namespace pebms {

using nlohmann::json;

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * unit(rng); }

std::size_t arity(AxiomId axiom) { return axiom == AxiomId::kTriangle ? 3 : 2; }

const Violation* first_of(const AxiomReport& report, AxiomId axiom) { return report.first(axiom); }

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t campaign_seed, std::size_t trial) noexcept {
  return splitmix64(campaign_seed + kGolden * (static_cast<std::uint64_t>(trial) + 1));
}

void FuzzConfig::validate() const {
  if (trials < 1) throw ArgumentError("fuzz: trials must be >= 1");
  if (n_min < 2) throw ArgumentError("fuzz: n_min must be >= 2");
  if (n_max < n_min) throw ArgumentError("fuzz: n_max must be >= n_min");
  if (!(mutation_factor > 0.0 && mutation_factor < 1.0)) {
    throw ArgumentError("fuzz: mutation factor must lie in (0, 1)");
  }
}

FiniteSpace gen_space(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw ArgumentError("gen_space: n must be >= 2");
  std::mt19937_64 rng(seed);
  Matrix p(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) p(i, j) = p(j, i) = uniform(rng, 0.1, 10.0);
  }
  for (std::size_t i = 0; i < n; ++i) {
    double row_min = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) row_min = std::min(row_min, p(i, j));
    }
    p(i, i) = 0.9 * unit(rng) * row_min;
  }
  // The diagonal is strictly below every row entry, so this only guards
  // against the A1 tolerance band.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double floor = std::max(p(i, i), p(j, j));
      if (p(i, j) - floor <= kIndistancyTolerance) p(i, j) = p(j, i) = floor + 1e-9;
    }
  }
  Matrix theta = minimal_theta(p);
  const double inflate = uniform(rng, 1.0, 3.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) theta(i, j) *= inflate;
  }
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
  return FiniteSpace(std::move(labels), std::move(p), std::move(theta), AxiomProfile::pebm());
}

std::optional<Mutation> mutate_theta(const FiniteSpace& space, double factor) {
  if (!(factor > 0.0 && factor < 1.0)) throw ArgumentError("mutate_theta: factor must lie in (0, 1)");
  if (!space.has_control()) throw ConfigError("mutate_theta: space has no Theta matrix");
  const std::size_t n = space.size();
  const AxiomProfile profile = AxiomProfile::pebm();
  std::optional<Mutation> best;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (!(space.theta(i, k) > 1.0)) continue;
      for (std::size_t j = 0; j < n; ++j) {
        const std::array<std::size_t, 3> w{i, j, k};
        const auto c = evaluate_clause(space, profile, AxiomId::kTriangle, w);
        if (!(c.bracket > 0.0) || c.margin < 0.0) continue;
        if (best && !(c.margin < best->margin)) continue;
        if (!best) best.emplace(Mutation{space, w, c.margin, 1.0, 1.0});
        best->triple = w;
        best->margin = c.margin;
      }
    }
  }
  if (!best) return std::nullopt;
  const std::size_t x = best->triple[0];
  const std::size_t z = best->triple[2];
  Matrix theta = *space.control();
  best->old_theta = theta(x, z);
  best->new_theta = std::max(1.0, factor * theta(x, z));
  theta(x, z) = best->new_theta;
  best->space = space.with_control(std::move(theta));
  return best;
}

FiniteSpace shrink(const FiniteSpace& space, const AxiomProfile& profile, AxiomId axiom) {
  if (!first_of(check_axioms(space, profile), axiom)) {
    throw ArgumentError("shrink: space does not violate " + axiom_name(axiom));
  }
  FiniteSpace current = space;
  bool progress = true;
  while (progress && current.size() > arity(axiom)) {
    progress = false;
    for (std::size_t drop = 0; drop < current.size(); ++drop) {
      std::vector<std::size_t> keep;
      for (std::size_t i = 0; i < current.size(); ++i) {
        if (i != drop) keep.push_back(i);
      }
      FiniteSpace candidate = current.subspace(keep);
      if (first_of(check_axioms(candidate, profile), axiom)) {
        current = std::move(candidate);
        progress = true;
        break;
      }
    }
  }
  return current;
}

namespace {

CounterexampleReport make_counterexample(const FiniteSpace& space, const AxiomProfile& profile,
                                         AxiomId axiom, std::uint64_t seed, std::size_t trial,
                                         std::string origin) {
  CounterexampleReport r{shrink(space, profile, axiom), {}, false, seed, trial, std::move(origin)};
  r.shrunk = r.space.size() < space.size();
  r.violation = *check_axioms(r.space, profile).first(axiom);
  return r;
}

}  // namespace

FuzzStats fuzz_campaign(const FuzzConfig& config) {
  config.validate();
  FuzzStats stats;
  stats.config = config;
  const std::size_t span = config.n_max - config.n_min + 1;
  for (std::size_t t = 0; t < config.trials; ++t) {
    const std::uint64_t seed = trial_seed(config.seed, t);
    const std::size_t n = config.n_min + static_cast<std::size_t>(splitmix64(seed) % span);
    const FiniteSpace space = gen_space(n, seed);

    const AxiomReport generated = check_axioms(space, config.profile);
    stats.checks_run += generated.checks_run;
    if (generated.passed) {
      ++stats.generated_passed;
    } else {
      ++stats.generated_failed;
      const Violation& v = generated.violations.front();
      stats.anomalies.push_back({t, seed, "generated_space_failed", describe_violation(v)});
      stats.counterexamples.push_back(
          make_counterexample(space, config.profile, v.axiom, seed, t, "generator"));
    }

    if (const auto inflated = mutate_theta(space, config.mutation_factor)) {
      const AxiomReport r = check_axioms(inflated->space, config.profile);
      stats.checks_run += r.checks_run;
      if (r.first(AxiomId::kTriangle)) ++stats.inflated_mutations_detected;
    }

    const FiniteSpace minimal = space.with_control(minimal_theta(space.distances()));
    const auto mutation = mutate_theta(minimal, config.mutation_factor);
    if (!mutation) {
      ++stats.mutations_impossible;
      continue;
    }
    ++stats.mutations_possible;
    const AxiomReport mutated = check_axioms(mutation->space, config.profile);
    stats.checks_run += mutated.checks_run;
    if (mutated.first(AxiomId::kTriangle)) {
      ++stats.mutations_detected;
      const std::size_t kept = std::count_if(
          stats.counterexamples.begin(), stats.counterexamples.end(),
          [](const CounterexampleReport& c) { return c.origin == "mutation"; });
      if (kept < config.keep_counterexamples) {
        stats.counterexamples.push_back(make_counterexample(
            mutation->space, config.profile, AxiomId::kTriangle, seed, t, "mutation"));
      }
    } else {
      ++stats.mutations_undetected;
      stats.anomalies.push_back(
          {t, seed, "mutation_undetected",
           "Theta(" + std::to_string(mutation->triple[0]) + "," +
               std::to_string(mutation->triple[2]) + ") " + format_real(mutation->old_theta) +
               " -> " + format_real(mutation->new_theta) + " left every A4 clause intact"});
    }
  }
  return stats;
}

json to_json(const FuzzConfig& c) {
  json j{{"n_min", c.n_min},
         {"n_max", c.n_max},
         {"trials", c.trials},
         {"seed", c.seed},
         {"mutation_factor", c.mutation_factor},
         {"keep_counterexamples", c.keep_counterexamples}};
  put_profile(j, c.profile);
  return j;
}

json to_json(const CounterexampleReport& r) {
  return {{"space", space_to_json(r.space)},
          {"violation", to_json(r.violation)},
          {"shrunk", r.shrunk},
          {"generation_seed", r.generation_seed},
          {"trial", r.trial},
          {"origin", r.origin}};
}

json to_json(const FuzzStats& s) {
  json anomalies = json::array();
  for (const auto& a : s.anomalies) {
    anomalies.push_back({{"trial", a.trial},
                         {"generation_seed", a.generation_seed},
                         {"kind", a.kind},
                         {"detail", a.detail}});
  }
  json cex = json::array();
  for (const auto& c : s.counterexamples) cex.push_back(to_json(c));
  return {{"config", to_json(s.config)},
          {"generated_passed", s.generated_passed},
          {"generated_failed", s.generated_failed},
          {"mutations_possible", s.mutations_possible},
          {"mutations_impossible", s.mutations_impossible},
          {"mutations_detected", s.mutations_detected},
          {"mutations_undetected", s.mutations_undetected},
          {"inflated_mutations_detected", s.inflated_mutations_detected},
          {"checks_run", s.checks_run},
          {"consistent", s.consistent()},
          {"anomalies", anomalies},
          {"counterexamples", cex}};
}

}  // namespace pebms
