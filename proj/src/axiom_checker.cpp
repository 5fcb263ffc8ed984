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

#include <algorithm>
#include <array>
#include <functional>
#include <optional>
#include <cmath>
#include <limits>
#include <tuple>

#include "pebms/errors.hpp"

namespace pebms {

using nlohmann::json;

std::string axiom_name(AxiomId id) {
  switch (id) {
    case AxiomId::kIndistancy: return "A1_indistancy";
    case AxiomId::kSmallSelf: return "A2_small_self";
    case AxiomId::kSymmetry: return "A3_symmetry";
    case AxiomId::kTriangle: return "A4_triangle";
  }
  return "A4_triangle";
}

AxiomId axiom_from_name(const std::string& name) {
  for (AxiomId id : {AxiomId::kIndistancy, AxiomId::kSmallSelf, AxiomId::kSymmetry,
                     AxiomId::kTriangle}) {
    if (axiom_name(id) == name) return id;
  }
  throw ConfigError("unknown axiom id '" + name + "'");
}

const Violation* AxiomReport::first(AxiomId id) const {
  for (const auto& v : violations) {
    if (v.axiom == id) return &v;
  }
  return nullptr;
}

namespace {

void require_control(const FiniteSpace& space, const AxiomProfile& profile) {
  if (profile.uses_control_matrix() && !space.has_control()) {
    throw ConfigError("profile '" + profile.tag() + "' needs a Theta matrix but the space has none");
  }
}

double coefficient(const FiniteSpace& space, const AxiomProfile& profile, std::size_t i,
                   std::size_t k) {
  return profile.uses_control_matrix() ? space.theta(i, k) : profile.constant_coefficient();
}

// lhs <= rhs, with a relative slack for closed forms evaluated in floating point.
bool within(double lhs, double rhs, double rel_tol) {
  if (lhs <= rhs) return true;
  return rel_tol > 0.0 && lhs - rhs <= rel_tol * std::max(std::fabs(lhs), std::fabs(rhs));
}

ClauseEvaluation evaluate_pair(const FiniteSpace& s, const AxiomProfile& profile, AxiomId axiom,
                               std::size_t i, std::size_t j, double eq_tol, double ineq_tol) {
  ClauseEvaluation c;
  c.axiom = axiom;
  c.witness = {i, j};
  switch (axiom) {
    case AxiomId::kIndistancy:
      if (profile.is_partial()) {
        const double pii = s.p(i, i);
        const double pij = s.p(i, j);
        const double pjj = s.p(j, j);
        c.lhs = pij;
        c.rhs = pii;
        c.margin = std::max(std::fabs(pii - pij), std::fabs(pij - pjj));
        // x = y makes the three-way equality hold; x != y must break it.
        c.holds = (i == j) || c.margin > kIndistancyTolerance;
      } else if (i == j) {
        c.lhs = s.p(i, i);
        c.rhs = 0.0;
        c.margin = std::fabs(c.lhs);
        c.holds = c.margin <= eq_tol;
      } else {
        c.lhs = s.p(i, j);
        c.rhs = 0.0;
        c.margin = std::fabs(c.lhs);
        c.holds = c.margin > kIndistancyTolerance;
      }
      break;
    case AxiomId::kSmallSelf:
      c.lhs = s.p(i, i);
      c.rhs = s.p(i, j);
      c.margin = c.rhs - c.lhs;
      c.holds = within(c.lhs, c.rhs, ineq_tol);
      break;
    case AxiomId::kSymmetry:
      c.lhs = s.p(i, j);
      c.rhs = s.p(j, i);
      c.margin = std::fabs(c.lhs - c.rhs);
      c.holds = c.margin <= eq_tol;
      break;
    case AxiomId::kTriangle:
      throw ArgumentError("A4 needs a witness of three indices");
  }
  return c;
}

ClauseEvaluation evaluate_triple(const FiniteSpace& s, const AxiomProfile& profile,
                                 std::size_t x, std::size_t y, std::size_t z, double ineq_tol) {
  ClauseEvaluation c;
  c.axiom = AxiomId::kTriangle;
  c.witness = {x, y, z};
  c.coefficient = coefficient(s, profile, x, z);
  c.bracket = s.p(x, y) + s.p(y, z);
  c.self_term = profile.is_partial() ? s.p(y, y) : 0.0;
  c.lhs = s.p(x, z) + c.self_term;
  c.rhs = c.coefficient * c.bracket;
  c.margin = c.rhs - c.lhs;
  c.holds = within(c.lhs, c.rhs, ineq_tol);
  return c;
}

Violation to_violation(const FiniteSpace& space, const ClauseEvaluation& c) {
  Violation v{c.axiom, c.witness, c.lhs, c.rhs, c.margin, {}};
  if (!space.coordinates().empty()) {
    for (std::size_t i : c.witness) v.points.push_back(space.coordinates()[i]);
  }
  return v;
}

bool is_inequality(AxiomId id) { return id == AxiomId::kSmallSelf || id == AxiomId::kTriangle; }

}  // namespace

ClauseEvaluation evaluate_clause(const FiniteSpace& space, const AxiomProfile& profile,
                                 AxiomId axiom, std::span<const std::size_t> witness,
                                 double equality_tolerance, double inequality_tolerance) {
  require_control(space, profile);
  if (axiom == AxiomId::kTriangle) {
    if (witness.size() != 3) throw ArgumentError("A4 needs a witness of three indices");
    return evaluate_triple(space, profile, witness[0], witness[1], witness[2],
                           inequality_tolerance);
  }
  if (witness.size() != 2) throw ArgumentError(axiom_name(axiom) + " needs a witness of two indices");
  return evaluate_pair(space, profile, axiom, witness[0], witness[1], equality_tolerance,
                       inequality_tolerance);
}

std::size_t expected_check_count(std::size_t n, const AxiomProfile& profile) {
  const std::size_t pairs = n * n;
  const std::size_t pair_axioms = profile.is_partial() ? 3 : 2;
  return pair_axioms * pairs + n * n * n;
}

AxiomReport check_axioms(const FiniteSpace& space, const AxiomProfile& profile,
                         const CheckOptions& options) {
  const std::size_t n = space.size();
  if (n == 0) throw ConfigError("cannot check axioms on an empty space");
  require_control(space, profile);

  AxiomReport report;
  report.profile = profile;
  double worst = std::numeric_limits<double>::infinity();

  auto consume = [&](ClauseEvaluation&& c) {
    ++report.checks_run;
    ++report.checks_by_axiom[c.axiom];
    if (is_inequality(c.axiom)) worst = std::min(worst, c.margin);
    if (!c.holds) report.violations.push_back(to_violation(space, c));
    if (options.record_checks) report.record.push_back(std::move(c));
  };

  std::vector<AxiomId> pair_axioms{AxiomId::kIndistancy};
  if (profile.is_partial()) pair_axioms.push_back(AxiomId::kSmallSelf);
  pair_axioms.push_back(AxiomId::kSymmetry);

  for (AxiomId id : pair_axioms) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        consume(evaluate_pair(space, profile, id, i, j, options.equality_tolerance,
                              options.inequality_tolerance));
      }
    }
  }
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t z = 0; z < n; ++z) {
        consume(evaluate_triple(space, profile, x, y, z, options.inequality_tolerance));
      }
    }
  }

  std::stable_sort(report.violations.begin(), report.violations.end(),
                   [](const Violation& a, const Violation& b) {
                     return std::tie(a.witness, a.axiom) < std::tie(b.witness, b.axiom);
                   });
  report.passed = report.violations.empty();
  report.worst_margin = std::isfinite(worst) ? worst : 0.0;
  return report;
}

AxiomReport check_axioms_sampled(const AnalyticSpace& space, std::size_t n,
                                 const AxiomProfile& profile) {
  const FiniteSpace grid = sample_grid(space, n);
  AxiomReport report = check_axioms(grid, profile, CheckOptions{kGridEqualityTolerance, false, kGridInequalityTolerance});
  report.grid_relative = true;
  return report;
}

Matrix minimal_theta(const Matrix& distances) {
  const Matrix& p = distances;
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::string at = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
      if (!(p(i, j) >= 0.0) || !std::isfinite(p(i, j))) {
        throw ArgumentError("minimal_theta: P" + at + " is not a finite nonnegative real");
      }
      if (p(i, j) != p(j, i)) throw ArgumentError("minimal_theta: P is not symmetric at " + at);
      if (p(i, i) > p(i, j)) throw ArgumentError("minimal_theta: P" + at + " is below P(i,i)");
    }
  }

  Matrix theta(n, 1.0);
  constexpr double kUp = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      double best = 1.0;
      for (std::size_t j = 0; j < n; ++j) {
        // Same expressions as the checker's A4 clause.
        const double lhs = p(i, k) + p(j, j);
        const double bracket = p(i, j) + p(j, k);
        if (bracket == 0.0) {
          if (lhs > 0.0) {
            throw InfeasibleError("minimal_theta: triple (" + std::to_string(i) + "," +
                                  std::to_string(j) + "," + std::to_string(k) +
                                  ") has a zero bracket and a positive left side");
          }
          continue;
        }
        double r = lhs / bracket;
        while (r * bracket < lhs) r = std::nextafter(r, kUp);
        for (;;) {
          const double lower = std::nextafter(r, -kUp);
          if (lower * bracket >= lhs) {
            r = lower;
          } else {
            break;
          }
        }
        best = std::max(best, r);
      }
      theta(i, k) = best;
    }
  }
  return theta;
}

// ---------------------------------------------------------------------------

bool ReductionReport::consistent() const {
  return std::none_of(implications.begin(), implications.end(), [](const ReductionOutcome& o) {
    return o.status == ReductionOutcome::Status::kBroken;
  });
}

namespace {

std::optional<double> constant_control(const FiniteSpace& space) {
  if (!space.has_control() || space.size() == 0) return std::nullopt;
  const Matrix& t = *space.control();
  const double first = t(0, 0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = 0; j < t.size(); ++j) {
      if (t(i, j) != first) return std::nullopt;
    }
  }
  return first;
}

bool zero_diagonal(const FiniteSpace& space) {
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (space.distances()(i, i) != 0.0) return false;
  }
  return true;
}

bool passes(const FiniteSpace& space, const AxiomProfile& profile) {
  return check_axioms(space, profile).passed;
}

ReductionOutcome implication(std::string name, bool premise, const std::string& premise_text,
                             const std::function<bool()>& conclusion,
                             const std::string& conclusion_text) {
  ReductionOutcome o;
  o.name = std::move(name);
  if (!premise) {
    o.status = ReductionOutcome::Status::kNotApplicable;
    o.detail = "not applicable: " + premise_text + " does not hold";
    return o;
  }
  const bool ok = conclusion();
  o.status = ok ? ReductionOutcome::Status::kHolds : ReductionOutcome::Status::kBroken;
  o.detail = premise_text + (ok ? " and " : " but not ") + conclusion_text;
  return o;
}

}  // namespace

ReductionReport verify_reductions(const FiniteSpace& space) {
  ReductionReport out;
  const AxiomProfile& declared = space.declared();
  out.declared_profile_passes =
      (!declared.uses_control_matrix() || space.has_control()) && passes(space, declared);

  const bool has_theta = space.has_control();
  const bool is_pebm = has_theta && passes(space, AxiomProfile::pebm());
  const bool is_ebm = has_theta && passes(space, AxiomProfile::ebm());
  const bool zero_diag = zero_diagonal(space);
  const auto s = constant_control(space);

  out.implications.push_back(implication(
      "ebm_implies_pebm", is_ebm, "space passes ebm",
      [&] { return passes(space, AxiomProfile::pebm()); }, "it passes pebm"));

  out.implications.push_back(implication(
      "pebm_induced_is_ebm", is_pebm, "space passes pebm",
      [&] { return passes(induced_ebm(space), AxiomProfile::ebm()); },
      "induced_ebm passes ebm"));

  out.implications.push_back(implication(
      "pebm_zero_diagonal_is_ebm", is_pebm && zero_diag,
      "space passes pebm with zero self-distance",
      [&] {
        const FiniteSpace d = induced_ebm(space);
        return d.distances() == space.distances() && passes(d, AxiomProfile::ebm());
      },
      "it equals its induced_ebm and passes ebm"));

  out.implications.push_back(implication(
      "pebm_constant_theta_is_pbm", is_pebm && s.has_value(),
      "space passes pebm with constant Theta",
      [&] { return passes(space, AxiomProfile::pbm(*s)); },
      "it passes pbm(s = Theta)"));

  const bool is_bmetric = s.has_value() && passes(space, AxiomProfile::b_metric(*s));
  out.implications.push_back(implication(
      "b_metric_is_pbm", is_bmetric, "space passes b_metric(s = Theta)",
      [&] { return passes(space, AxiomProfile::pbm(*s)); }, "it passes pbm(s)"));

  const bool is_pm = passes(space, AxiomProfile::partial_metric());
  out.implications.push_back(implication(
      "partial_metric_is_pbm_1", is_pm, "space passes partial_metric",
      [&] { return passes(space, AxiomProfile::pbm(1.0)); }, "it passes pbm(1)"));

  return out;
}

// ---------------------------------------------------------------------------
// JSON

json to_json(const Violation& v) {
  json j;
  j["axiom"] = axiom_name(v.axiom);
  j["witness"] = v.witness;
  j["lhs"] = v.lhs;
  j["rhs"] = v.rhs;
  j["margin"] = v.margin;
  if (!v.points.empty()) j["points"] = v.points;
  return j;
}

Violation violation_from_json(const json& j) {
  Violation v;
  v.axiom = axiom_from_name(j.at("axiom").get<std::string>());
  v.witness = j.at("witness").get<std::vector<std::size_t>>();
  v.lhs = j.at("lhs").get<double>();
  v.rhs = j.at("rhs").get<double>();
  v.margin = j.at("margin").get<double>();
  if (j.contains("points")) v.points = j.at("points").get<std::vector<double>>();
  return v;
}

json to_json(const AxiomReport& report) {
  json j;
  put_profile(j, report.profile);
  j["verdict"] = report.passed ? "pass" : "fail";
  j["checks_run"] = report.checks_run;
  json by_axiom = json::object();
  for (const auto& [id, count] : report.checks_by_axiom) by_axiom[axiom_name(id)] = count;
  j["checks_by_axiom"] = by_axiom;
  j["violations"] = json::array();
  for (const auto& v : report.violations) j["violations"].push_back(to_json(v));
  j["worst_margin"] = report.worst_margin;
  j["grid_relative"] = report.grid_relative;
  return j;
}

json to_json(const ReductionReport& report) {
  json j;
  j["declared_profile_passes"] = report.declared_profile_passes;
  j["consistent"] = report.consistent();
  j["implications"] = json::array();
  for (const auto& o : report.implications) {
    const char* status = o.status == ReductionOutcome::Status::kHolds    ? "holds"
                         : o.status == ReductionOutcome::Status::kBroken ? "broken"
                                                                         : "not_applicable";
    j["implications"].push_back({{"name", o.name}, {"status", status}, {"detail", o.detail}});
  }
  return j;
}

}  // namespace pebms
