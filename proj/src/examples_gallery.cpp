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

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "pebms/errors.hpp"

namespace pebms {

using nlohmann::json;

namespace {

// Sequence tolerances: 1/n converges slowly, 1/n^2 fast.
constexpr double kHarmonicTol = 1e-2;
constexpr std::size_t kHarmonicTerms = 1000;
constexpr double kInverseSquareTol = 1e-5;
constexpr std::size_t kInverseSquareTerms = 2000;
constexpr std::size_t kTailWindow = 100;

const std::vector<std::string> kIds = {
    "ebm_235", "pbm_213", "pebm_absx", "pebm_max", "pebm_min", "pebm_kannan",
    "pebm_kannan_unbounded",
};

GalleryEntry make_ebm_235() {
  const std::vector<double> xs{2.0, 3.0, 4.0};
  Matrix p(3, 20.0);
  Matrix theta(3);
  for (std::size_t i = 0; i < 3; ++i) {
    p(i, i) = 0.0;
    for (std::size_t j = 0; j < 3; ++j) theta(i, j) = 1.0 + xs[i] + xs[j];
  }
  GalleryEntry e{"ebm_235",
                 FiniteSpace({"2", "3", "4"}, p, theta, AxiomProfile::ebm(), xs),
                 AxiomProfile::ebm(),
                 std::nullopt,
                 std::nullopt,
                 std::nullopt,
                 "X = {2,3,4}, d = 20 off the diagonal, theta(x,y) = 1+x+y is an extended "
                 "b-metric space",
                 ExpectedOutcome::kConfirms,
                 "exhaustive over 27 ordered triples; d(2,3) <= 6*(20+20) = 240 and "
                 "d(2,4) <= 7*(20+20) = 280 are read back from the check record"};
  return e;
}

GalleryEntry make_pbm_213() {
  const double b = 2.0;
  const double s = std::pow(2.0, b);
  return {"pbm_213",
          AnalyticSpace({0.5, 2.5}, "max(x,y)^b + abs(x-y)^b", "2^b", {{"b", b}},
                        AxiomProfile::pbm(s)),
          AxiomProfile::pbm(s),
          std::nullopt,
          std::nullopt,
          std::nullopt,
          "p(x,y) = max(x,y)^b + |x-y|^b on (0, inf) is a partial b-metric with s = 2^b",
          ExpectedOutcome::kConfirms,
          "instantiated at b = 2 (s = 4) and sampled on [0.5, 2.5]; a grid pass is evidence"};
}

GalleryEntry make_pebm_absx() {
  const Interval dom{0.0, 1.0};
  return {"pebm_absx",
          AnalyticSpace(dom, "abs(x-y)+x", "1", {}, AxiomProfile::pebm()),
          AxiomProfile::pebm(),
          AnyMap{AnalyticMap("x/4", dom)},
          ContractionSpec::make(ContractionFamily::kModifiedKannan, 1.0 / 3.0),
          1.0,
          "p(x,y) = |x-y| + x on [0,1] is a partial extended b-metric (theta = 1 with "
          "T(x) = x/4 for the modified Kannan condition; theta = 1+x+y in the other "
          "formulation)",
          ExpectedOutcome::kRefutes,
          "p is not symmetric: p(0,1) = 1 but p(1,0) = 2, independent of theta. The formula "
          "is kept verbatim; the Picard orbit still reaches 0"};
}

GalleryEntry make_pebm_max() {
  return {"pebm_max",
          AnalyticSpace({0.0, 1.0}, "max(x,y)", "1+x+y", {}, AxiomProfile::pebm()),
          AxiomProfile::pebm(),
          std::nullopt,
          std::nullopt,
          std::nullopt,
          "p = max(x,y), theta = 1+x+y on [0,1] is a complete partial extended b-metric "
          "space and x_n = 1/n converges to 0 and is Cauchy",
          ExpectedOutcome::kConfirms,
          "completeness itself is not checkable; convergence and Cauchy behaviour are "
          "windowed numerical evidence"};
}

GalleryEntry make_pebm_min() {
  return {"pebm_min",
          AnalyticSpace({0.0, 2.0}, "abs(x-y)+min(x,y)", "1+x+y", {}, AxiomProfile::pebm()),
          AxiomProfile::pebm(),
          std::nullopt,
          std::nullopt,
          std::nullopt,
          "on X = [0, inf), p = |x-y| + min(x,y), theta = 1+x+y, x_n = 1/n^2 is 0-Cauchy "
          "but its limit 0 is not in X, so the space is not 0-complete",
          ExpectedOutcome::kInconsistent,
          "0-Cauchy is confirmed, but X as defined contains 0 and p(x_n,0) -> p(0,0) = 0, so "
          "the completeness argument does not apply. Axioms sampled on [0,2]"};
}

GalleryEntry make_pebm_kannan(bool unbounded) {
  const Interval dom = unbounded ? Interval{0.0, 100.0} : Interval{0.0, 1.0};
  GalleryEntry e{unbounded ? "pebm_kannan_unbounded" : "pebm_kannan",
                 AnalyticSpace(dom, "max(x,y)", "1 + x*y/(1+x+y)", {}, AxiomProfile::pebm()),
                 AxiomProfile::pebm(),
                 AnyMap{AnalyticMap("x/4", dom)},
                 ContractionSpec::make(ContractionFamily::kKannan, 1.0 / 3.0),
                 1.0,
                 "T(x) = x/4 satisfies the Kannan-type fixed point conditions for "
                 "p = max(x,y), theta = 1 + xy/(1+x+y) on [0, inf)",
                 unbounded ? ExpectedOutcome::kRefutes : ExpectedOutcome::kConfirms,
                 ""};
  e.notes = unbounded
                ? "theta(Tx,x) = 1 + x^2/(4+5x) is unbounded on [0, inf), so theta(Tx,x) < 1/k "
                  "fails for every k in (0, 1/2); shown on the window [0, 100] with k = 1/3"
                : "domain truncated to [0,1], where sup theta(Tx,x) = 10/9 < 3";
  return e;
}

ConvergenceCertificate<double> certificate_or_empty(const SolveResult<double>& r) {
  return r.certificate ? *r.certificate : ConvergenceCertificate<double>{};
}

json truncated(const AxiomReport& report, std::size_t keep = 10) {
  json j = to_json(report);
  j["violations_total"] = report.violations.size();
  if (j["violations"].size() > keep) {
    json head = json::array();
    for (std::size_t i = 0; i < keep; ++i) head.push_back(j["violations"][i]);
    j["violations"] = head;
  }
  return j;
}

json solve_json(const CertifiedSolve<double>& s) {
  json j;
  j["spec"] = to_json(s.spec);
  j["contraction"] = to_json(s.contraction);
  j["theta_condition"] = to_json(s.theta);
  j["converged"] = s.solve.converged();
  j["iterations"] = s.solve.trace.rows.empty() ? 0 : s.solve.trace.rows.back().n;
  j["final_step"] = s.solve.final_step;
  if (s.solve.certificate) j["certificate"] = to_json(*s.solve.certificate);
  j["preconditions_hold"] = s.preconditions_hold();
  return j;
}

PointSequence<double> sequence(std::size_t count, double offset, double power, std::string name) {
  PointSequence<double> seq;
  seq.generator = std::move(name);
  for (std::size_t n = 1; n <= count; ++n) {
    seq.terms.push_back(offset + 1.0 / std::pow(static_cast<double>(n), power));
  }
  return seq;
}

SolveOptions solve_options(std::size_t grid_n, double tol) {
  SolveOptions o;
  o.grid_n = grid_n;
  o.tol = tol;
  return o;
}

// --- per-entry runners -----------------------------------------------------

void run_ebm_235(const GalleryEntry& e, GalleryResult& r) {
  const auto& space = std::get<FiniteSpace>(e.space);
  r.axioms = check_axioms(space, e.profile, CheckOptions{0.0, true});

  auto find = [&](std::vector<std::size_t> w) -> const ClauseEvaluation* {
    for (const auto& c : r.axioms.record) {
      if (c.axiom == AxiomId::kTriangle && c.witness == w) return &c;
    }
    return nullptr;
  };
  // (x,y,z) = (2,4,3) and (2,3,4) as indices.
  const ClauseEvaluation* t243 = find({0, 2, 1});
  const ClauseEvaluation* t234 = find({0, 1, 2});
  auto clause_json = [](const ClauseEvaluation* c) {
    return json{{"lhs", c->lhs},
                {"coefficient", c->coefficient},
                {"bracket", c->bracket},
                {"rhs", c->rhs},
                {"margin", c->margin}};
  };
  const std::size_t triples = r.axioms.checks_by_axiom[AxiomId::kTriangle];
  r.diagnostics["triangle_checks"] = triples;
  r.diagnostics["triple_2_4_3"] = clause_json(t243);
  r.diagnostics["triple_2_3_4"] = clause_json(t234);
  const bool products = t243->coefficient == 6.0 && t243->bracket == 40.0 &&
                        t243->rhs == 240.0 && t234->coefficient == 7.0 &&
                        t234->bracket == 40.0 && t234->rhs == 280.0;
  r.diagnostics["products_match"] = products;
  r.observed = r.axioms.passed && triples == 27 && products ? ExpectedOutcome::kConfirms
                                                            : ExpectedOutcome::kRefutes;
  r.summary = "ebm " + std::string(r.axioms.passed ? "pass" : "fail") + ", " +
              std::to_string(triples) + " triples; 6*40=" + format_real(t243->rhs) +
              ", 7*40=" + format_real(t234->rhs);
}

void run_pbm_213(const GalleryEntry& e, GalleryResult& r, std::size_t grid_n) {
  r.axioms = check_axioms_sampled(std::get<AnalyticSpace>(e.space), grid_n, e.profile);
  r.observed = r.axioms.passed ? ExpectedOutcome::kConfirms : ExpectedOutcome::kRefutes;
  r.summary = "pbm(s=" + format_real(e.profile.s) + ") " + (r.axioms.passed ? "pass" : "fail") +
              " on " + std::to_string(grid_n) + "-point grid";
}

void run_pebm_absx(const GalleryEntry& e, GalleryResult& r, std::size_t grid_n, double tol) {
  const auto& space = std::get<AnalyticSpace>(e.space);
  r.axioms = check_axioms_sampled(space, grid_n, e.profile);
  const double lo = space.domain().lo;
  const double hi = space.domain().hi;
  for (const auto& v : r.axioms.violations) {
    if (v.axiom == AxiomId::kSymmetry && v.points == std::vector<double>{lo, hi}) {
      GalleryWitness w{"A3_symmetry: p(x,y) != p(y,x)", v.points, v.lhs, v.rhs, v.margin, false};
      w.reverified = eval_p(space, lo, hi) == v.lhs && eval_p(space, hi, lo) == v.rhs &&
                     std::fabs(v.lhs - v.rhs) > kGridEqualityTolerance;
      r.witnesses.push_back(w);
      break;
    }
  }

  const AnalyticSpace variant(space.domain(), space.p_form(), "1+x+y");
  const AxiomReport variant_report = check_axioms_sampled(variant, grid_n, e.profile);
  r.diagnostics["variant_theta_1_plus_x_plus_y"] = {
      {"verdict", variant_report.passed ? "pass" : "fail"},
      {"symmetry_violations",
       std::count_if(variant_report.violations.begin(), variant_report.violations.end(),
                     [](const Violation& v) { return v.axiom == AxiomId::kSymmetry; })}};

  const auto solved = certified_solve(space, std::get<AnalyticMap>(*e.map), *e.contraction,
                                      *e.start, solve_options(grid_n, tol));
  r.diagnostics["solve"] = solve_json(solved);

  const bool refuted = !r.axioms.passed && !r.witnesses.empty() && r.witnesses[0].reverified;
  r.observed = refuted ? ExpectedOutcome::kRefutes : ExpectedOutcome::kConfirms;
  const auto cert = certificate_or_empty(solved.solve);
  r.summary = refuted ? "A3 fails: p(0,1)=" + format_real(r.witnesses[0].lhs) + " vs p(1,0)=" +
                            format_real(r.witnesses[0].rhs) + "; orbit still reaches u=" +
                            format_real(cert.fixed_point)
                      : "no symmetry witness found";
}

void run_pebm_max(const GalleryEntry& e, GalleryResult& r, std::size_t grid_n) {
  const auto& space = std::get<AnalyticSpace>(e.space);
  r.axioms = check_axioms_sampled(space, grid_n, e.profile);
  const auto seq = sequence(kHarmonicTerms, 0.0, 1.0, "x_n = 1/n");
  const auto conv = converges_to(space, seq, 0.0, kHarmonicTol);
  const auto cauchy = cauchy_tail(space, seq, kTailWindow);
  r.diagnostics["converges_to_0"] = to_json(conv);
  r.diagnostics["cauchy_tail"] = to_json(cauchy);
  const bool ok = r.axioms.passed && conv.passed && cauchy.spread <= kHarmonicTol;
  r.observed = ok ? ExpectedOutcome::kConfirms : ExpectedOutcome::kRefutes;
  r.summary = std::string("pebm ") + (r.axioms.passed ? "pass" : "fail") +
              "; 1/n -> 0 discrepancy " + format_real(conv.discrepancy) + ", Cauchy spread " +
              format_real(cauchy.spread);
}

void run_pebm_min(const GalleryEntry& e, GalleryResult& r, std::size_t grid_n) {
  const auto& space = std::get<AnalyticSpace>(e.space);
  r.axioms = check_axioms_sampled(space, grid_n, e.profile);
  const auto seq = sequence(kInverseSquareTerms, 0.0, 2.0, "x_n = 1/n^2");
  const double tail = zero_cauchy_tail(space, seq, kTailWindow);
  const auto conv = converges_to(space, seq, 0.0, kInverseSquareTol);
  // X = [0, inf) as stated.
  const Interval stated{0.0, std::numeric_limits<double>::infinity()};
  const bool zero_in_x = stated.contains(0.0);
  const double self0 = eval_p(space, 0.0, 0.0);

  r.diagnostics["zero_cauchy_tail"] = tail;
  r.diagnostics["zero_cauchy"] = tail <= kInverseSquareTol;
  r.diagnostics["converges_to_0"] = to_json(conv);
  r.diagnostics["limit_in_stated_domain"] = zero_in_x;
  r.diagnostics["limit_self_distance"] = self0;

  GalleryWitness w{"limit 0 lies in X = [0, inf) with p(0,0) = 0",
                   {0.0},
                   conv.discrepancy,
                   self0,
                   -conv.discrepancy,
                   false};
  w.reverified = zero_in_x && space.contains(0.0) && self0 == 0.0 && conv.passed;
  r.witnesses.push_back(w);

  const bool zero_cauchy = tail <= kInverseSquareTol;
  if (!r.axioms.passed || !zero_cauchy) {
    r.observed = ExpectedOutcome::kRefutes;
  } else {
    r.observed = w.reverified ? ExpectedOutcome::kInconsistent : ExpectedOutcome::kConfirms;
  }
  r.summary = "0-Cauchy tail " + format_real(tail) + "; 0 in X and x_n -> 0 with p(0,0)=0, "
              "completeness claim inconsistent";
}

void run_pebm_kannan(const GalleryEntry& e, GalleryResult& r, std::size_t grid_n, double tol) {
  const auto& space = std::get<AnalyticSpace>(e.space);
  const auto& map = std::get<AnalyticMap>(*e.map);
  const auto opts = solve_options(grid_n, tol);
  auto solved = certified_solve(space, map, *e.contraction, *e.start, opts);
  r.axioms = solved.axioms;

  const std::vector<double> starts{0.0, 0.3, 0.7, 1.0};
  const auto uniq = uniqueness_probe(space, map, std::span<const double>(starts), tol, opts.max_iter);
  if (solved.solve.certificate) solved.solve.certificate->unique_within_starts = uniq.passed;
  r.diagnostics["solve"] = solve_json(solved);
  r.diagnostics["uniqueness"] = to_json(uniq);

  const bool ok = solved.preconditions_hold() && solved.solve.converged() && uniq.passed;
  r.observed = ok ? ExpectedOutcome::kConfirms : ExpectedOutcome::kRefutes;
  r.summary = std::string("preconditions ") + (solved.preconditions_hold() ? "hold" : "fail") +
              ", sup theta(Tx,x) " + format_real(solved.theta.observed_sup) + " < 3, u = " +
              format_real(certificate_or_empty(solved.solve).fixed_point);
}

void run_pebm_kannan_unbounded(const GalleryEntry& e, GalleryResult& r, std::size_t grid_n) {
  const auto& space = std::get<AnalyticSpace>(e.space);
  const auto& map = std::get<AnalyticMap>(*e.map);
  const ContractionSpec spec = *e.contraction;
  r.axioms = check_axioms_sampled(space, grid_n, e.profile);
  const auto pts = grid_points(space.domain(), grid_n);
  const auto pairs = all_pairs<double>(pts);
  const auto contraction =
      verify_contraction(space, map, spec, std::span<const std::pair<double, double>>(pairs));
  const auto theta = verify_theta_condition(space, map, spec, *e.start, 2,
                                            std::span<const double>(pts));
  r.diagnostics["contraction"] = to_json(contraction);
  r.diagnostics["theta_condition"] = to_json(theta);

  // theta(x/4, x) = 1 + x^2/(4+5x) reaches 1/k at the positive root of
  // x^2 - 5cx - 4c = 0 with c = 1/k - 1.
  const double c = 1.0 / spec.k - 1.0;
  r.diagnostics["threshold_x"] = (5.0 * c + std::sqrt(25.0 * c * c + 16.0 * c)) / 2.0;

  if (!theta.passed && theta.witness) {
    const double x = theta.witness->second;
    GalleryWitness w{"theta(Tx,x) >= 1/k", {x}, theta.observed_sup, theta.limit,
                     theta.limit - theta.observed_sup, false};
    w.reverified = eval_theta(space, map(x), x) == theta.observed_sup &&
                   !(theta.observed_sup < theta.limit);
    r.witnesses.push_back(w);
  }
  const bool refuted = !r.witnesses.empty() && r.witnesses[0].reverified;
  r.observed = refuted ? ExpectedOutcome::kRefutes : ExpectedOutcome::kConfirms;
  r.summary = "sup theta(Tx,x) = " + format_real(theta.observed_sup) + " vs 1/k = " +
              format_real(theta.limit) + " on [0," + format_real(space.domain().hi) + "]";
}

}  // namespace

std::string outcome_name(ExpectedOutcome o) {
  switch (o) {
    case ExpectedOutcome::kConfirms: return "confirms";
    case ExpectedOutcome::kRefutes: return "refutes";
    case ExpectedOutcome::kInconsistent: return "inconsistent";
  }
  return "confirms";
}

const std::vector<std::string>& gallery_ids() { return kIds; }

GalleryEntry build_example(const std::string& id) {
  if (id == "ebm_235") return make_ebm_235();
  if (id == "pbm_213") return make_pbm_213();
  if (id == "pebm_absx") return make_pebm_absx();
  if (id == "pebm_max") return make_pebm_max();
  if (id == "pebm_min") return make_pebm_min();
  if (id == "pebm_kannan") return make_pebm_kannan(false);
  if (id == "pebm_kannan_unbounded") return make_pebm_kannan(true);
  std::string valid;
  for (const auto& v : kIds) valid += (valid.empty() ? "" : ", ") + v;
  throw LookupError("unknown gallery id '" + id + "'; valid ids: " + valid);
}

GalleryResult run_example(const GalleryEntry& e, std::size_t grid_n, double tol) {
  if (grid_n < 2) throw ArgumentError("run_gallery: grid_n must be >= 2");
  if (!(tol > 0.0)) throw ArgumentError("run_gallery: tol must be positive");
  GalleryResult r;
  r.id = e.id;
  r.expected = e.expected;
  r.diagnostics = json::object();
  if (e.id == "ebm_235") {
    run_ebm_235(e, r);
  } else if (e.id == "pbm_213") {
    run_pbm_213(e, r, grid_n);
  } else if (e.id == "pebm_absx") {
    run_pebm_absx(e, r, grid_n, tol);
  } else if (e.id == "pebm_max") {
    run_pebm_max(e, r, grid_n);
  } else if (e.id == "pebm_min") {
    run_pebm_min(e, r, grid_n);
  } else if (e.id == "pebm_kannan") {
    run_pebm_kannan(e, r, grid_n, tol);
  } else if (e.id == "pebm_kannan_unbounded") {
    run_pebm_kannan_unbounded(e, r, grid_n);
  } else {
    throw LookupError("no runner for gallery id '" + e.id + "'");
  }
  r.matches = r.observed == r.expected;
  return r;
}

bool GalleryReport::passed() const {
  return std::all_of(results.begin(), results.end(), [](const GalleryResult& r) { return r.matches; });
}

GalleryReport run_gallery(std::size_t grid_n, double tol) {
  GalleryReport report;
  report.grid_n = grid_n;
  report.tol = tol;
  for (const auto& id : kIds) report.results.push_back(run_example(build_example(id), grid_n, tol));
  return report;
}

json to_json(const GalleryReport& report) {
  json entries = json::object();
  for (const auto& r : report.results) {
    const GalleryEntry e = build_example(r.id);
    json w = json::array();
    for (const auto& x : r.witnesses) {
      w.push_back({{"what", x.what},
                   {"points", x.points},
                   {"lhs", x.lhs},
                   {"rhs", x.rhs},
                   {"margin", x.margin},
                   {"reverified", x.reverified}});
    }
    entries[r.id] = {{"claim", e.claim},
                     {"expected", outcome_name(r.expected)},
                     {"observed", outcome_name(r.observed)},
                     {"matches", r.matches},
                     {"summary", r.summary},
                     {"notes", e.notes},
                     {"space", space_to_json(e.space)},
                     {"axioms", truncated(r.axioms)},
                     {"witnesses", w},
                     {"diagnostics", r.diagnostics}};
  }
  return {{"grid_n", report.grid_n},
          {"tol", report.tol},
          {"verdict", report.passed() ? "pass" : "fail"},
          {"entries", entries}};
}

std::string to_text(const GalleryReport& report) {
  std::ostringstream out;
  std::size_t width = 2;
  for (const auto& r : report.results) width = std::max(width, r.id.size());
  out << std::left << std::setw(static_cast<int>(width)) << "id" << "  " << std::setw(12)
      << "expected" << "  " << std::setw(12) << "observed" << "  " << std::setw(5) << "match"
      << "  summary\n";
  for (const auto& r : report.results) {
    out << std::left << std::setw(static_cast<int>(width)) << r.id << "  " << std::setw(12)
        << outcome_name(r.expected) << "  " << std::setw(12) << outcome_name(r.observed) << "  "
        << std::setw(5) << (r.matches ? "yes" : "NO") << "  " << r.summary << '\n';
  }
  out << "gallery: " << (report.passed() ? "pass" : "fail") << " (grid_n=" << report.grid_n
      << ", tol=" << format_real(report.tol) << ")\n";
  return out.str();
}

}  // namespace pebms
