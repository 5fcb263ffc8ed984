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

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pebms/axiom_checker.hpp"
#include "pebms/core_spaces.hpp"
#include "pebms/errors.hpp"
#include "pebms/sequence_diagnostics.hpp"

namespace pebms {

enum class ContractionFamily {
  kBanach,          // p(Tx,Ty) <= k p(x,y),                 k in [0, 1)
  kKannan,          // p(Tx,Ty) <= k [p(x,Tx) + p(y,Ty)],    k in [0, 1/2)
  kModifiedKannan,  // p(Tx,Ty) <= k [p(x,Ty) + p(y,Ty)],    k in [0, 1/2)
};

std::string family_name(ContractionFamily f);
/// Accepts "banach", "kannan", "modkannan" (also "modified_kannan").
ContractionFamily family_from_name(const std::string& name);

struct ContractionSpec {
  ContractionFamily family = ContractionFamily::kBanach;
  double k = 0.0;

  /// Throws ArgumentError when k is outside the family's admissible range.
  static ContractionSpec make(ContractionFamily family, double k);
};

enum class EvidenceMode { kExhaustive, kGrid };

inline EvidenceMode evidence_mode(const FiniteSpace&) { return EvidenceMode::kExhaustive; }
inline EvidenceMode evidence_mode(const AnalyticSpace&) { return EvidenceMode::kGrid; }
std::string mode_name(EvidenceMode mode);

/// Every point of a finite space; grid_points of an analytic one.
inline std::vector<std::size_t> sample_points(const FiniteSpace& space, std::size_t /*grid_n*/) {
  std::vector<std::size_t> pts(space.size());
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = i;
  return pts;
}
inline std::vector<double> sample_points(const AnalyticSpace& space, std::size_t grid_n) {
  return grid_points(space.domain(), grid_n);
}

inline AxiomReport check_space(const FiniteSpace& space, const AxiomProfile& profile,
                               std::size_t /*grid_n*/) {
  return check_axioms(space, profile);
}
inline AxiomReport check_space(const AnalyticSpace& space, const AxiomProfile& profile,
                               std::size_t grid_n) {
  return check_axioms_sampled(space, grid_n, profile);
}

template <class Point>
std::vector<std::pair<Point, Point>> all_pairs(std::span<const Point> points) {
  std::vector<std::pair<Point, Point>> out;
  out.reserve(points.size() * points.size());
  for (const Point& a : points) {
    for (const Point& b : points) out.emplace_back(a, b);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Precondition verifiers

template <class Point>
struct ContractionReport {
  ContractionSpec spec;
  bool passed = true;
  double worst_ratio = 0.0;  // smallest k admissible on the sample
  std::size_t pairs_checked = 0;
  std::size_t hard_violations = 0;  // zero bracket with nonzero left side
  std::optional<std::pair<Point, Point>> witness;
  EvidenceMode mode = EvidenceMode::kExhaustive;
};

/// Evaluates the family's contractive inequality at every sample pair.
template <class Space, class Map>
ContractionReport<typename Space::point_type> verify_contraction(
    const Space& space, const Map& map, const ContractionSpec& spec,
    std::span<const std::pair<typename Space::point_type, typename Space::point_type>> sample) {
  if (sample.empty()) throw ArgumentError("verify_contraction: empty sample");
  ContractionReport<typename Space::point_type> r;
  r.spec = spec;
  r.mode = evidence_mode(space);
  double worst_failing = -1.0;
  for (const auto& [x, y] : sample) {
    const auto tx = map(x);
    const auto ty = map(y);
    const double lhs = space.p(tx, ty);
    double bracket = 0.0;
    switch (spec.family) {
      case ContractionFamily::kBanach: bracket = space.p(x, y); break;
      case ContractionFamily::kKannan: bracket = space.p(x, tx) + space.p(y, ty); break;
      case ContractionFamily::kModifiedKannan: bracket = space.p(x, ty) + space.p(y, ty); break;
    }
    ++r.pairs_checked;
    double ratio = 0.0;
    if (bracket == 0.0) {
      if (lhs == 0.0) continue;
      ++r.hard_violations;
      ratio = std::numeric_limits<double>::infinity();
    } else {
      ratio = lhs / bracket;
    }
    r.worst_ratio = std::max(r.worst_ratio, ratio);
    const bool holds = bracket != 0.0 && lhs <= spec.k * bracket;
    if (!holds) {
      r.passed = false;
      if (ratio > worst_failing) {
        worst_failing = ratio;
        r.witness = std::make_pair(x, y);
      }
    }
  }
  return r;
}

template <class Point>
struct ThetaConditionReport {
  bool passed = true;
  double observed_sup = 1.0;
  double limit = std::numeric_limits<double>::infinity();  // 1/k
  double margin = std::numeric_limits<double>::infinity(); // limit - observed_sup
  std::size_t horizon = 0;  // Banach only
  std::optional<std::pair<Point, Point>> witness;  // arguments of the sup
};

/// Banach: max theta(x_n, x_m), n < m, over the tail half of the orbit up to
/// `horizon`, against 1/k. Kannan families: sup over `sample` of theta(Tx, x)
/// against 1/k. Both comparisons are strict.
template <class Space, class Map>
ThetaConditionReport<typename Space::point_type> verify_theta_condition(
    const Space& space, const Map& map, const ContractionSpec& spec,
    typename Space::point_type x0, std::size_t horizon,
    std::span<const typename Space::point_type> sample) {
  using Point = typename Space::point_type;
  ThetaConditionReport<Point> r;
  r.limit = spec.k > 0.0 ? 1.0 / spec.k : std::numeric_limits<double>::infinity();
  double sup = -std::numeric_limits<double>::infinity();
  auto consider = [&](Point a, Point b) {
    const double t = space.theta(a, b);
    if (t > sup) {
      sup = t;
      r.witness = std::make_pair(a, b);
    }
  };
  if (spec.family == ContractionFamily::kBanach) {
    if (horizon < 2) throw ArgumentError("verify_theta_condition: horizon must be >= 2");
    r.horizon = horizon;
    const auto seq = orbit(map, x0, horizon);
    for (std::size_t n = horizon / 2; n <= horizon; ++n) {
      for (std::size_t m = n + 1; m <= horizon; ++m) consider(seq.terms[n], seq.terms[m]);
    }
  } else {
    if (sample.empty()) throw ArgumentError("verify_theta_condition: empty sample");
    for (const Point& x : sample) consider(map(x), x);
  }
  r.observed_sup = sup;
  r.margin = r.limit - sup;
  r.passed = sup < r.limit;
  return r;
}

// ---------------------------------------------------------------------------
// Picard iteration

template <class Point>
struct TraceRow {
  std::size_t n = 0;
  Point x{};
  double step_dist = 0.0;  // p(x_n, x_{n+1})
  double self_dist = 0.0;  // p(x_n, x_n)
  double bound = std::numeric_limits<double>::quiet_NaN();
  double n_self = 0.0;     // n * p(x_n, x_n)
};

/// Rows for n = 0..N and the iterates x_0..x_{N+1}.
///
/// The bound column depends on the family the trace was produced under:
/// Banach k^n p(x_0,x_1); Kannan (k/(1-k))^n p(x_0,x_1); modified Kannan the
/// step bound k^n p(x_1,x_0) + k sum_{t=1}^n k^(n-t) p(x_t,x_t), which bounds
/// p(x_{n+1}, x_n). NaN when no family was given.
template <class Point>
struct IterationTrace {
  std::vector<TraceRow<Point>> rows;
  std::vector<Point> points;
  std::optional<ContractionSpec> spec;
};

struct Precondition {
  std::string name;
  bool verified = false;
  std::string detail;
};

template <class Point>
struct ConvergenceCertificate {
  Point fixed_point{};
  double residual = 0.0;       // p(Tu, u)
  double self_distance = 0.0;  // p(u, u)
  std::size_t iterations = 0;
  std::vector<Precondition> preconditions;
  bool unique_within_starts = false;
  EvidenceMode mode = EvidenceMode::kExhaustive;
};

template <class Point>
struct SolveResult {
  IterationTrace<Point> trace;
  std::optional<ConvergenceCertificate<Point>> certificate;
  double final_step = 0.0;

  bool converged() const noexcept { return certificate.has_value(); }
};

double kannan_step_bound(double k, std::size_t n, double p01);

namespace detail {

void require_unit_k(double k, const char* who);
void require_half_k(double k, const char* who);

template <class Space>
void fill_bounds(const Space& space, IterationTrace<typename Space::point_type>& trace) {
  if (!trace.spec || trace.rows.empty()) return;
  const double k = trace.spec->k;
  const double p01 = trace.rows.front().step_dist;
  switch (trace.spec->family) {
    case ContractionFamily::kBanach:
      for (auto& row : trace.rows) row.bound = std::pow(k, static_cast<double>(row.n)) * p01;
      break;
    case ContractionFamily::kKannan:
      for (auto& row : trace.rows) row.bound = kannan_step_bound(k, row.n, p01);
      break;
    case ContractionFamily::kModifiedKannan: {
      const double p10 = space.p(trace.points[1], trace.points[0]);
      double acc = 0.0;  // sum_{t=1}^n k^(n-t) p(x_t, x_t)
      for (auto& row : trace.rows) {
        if (row.n > 0) acc = k * acc + row.self_dist;
        row.bound = std::pow(k, static_cast<double>(row.n)) * p10 + k * acc;
      }
      break;
    }
  }
}

}  // namespace detail

/// Iterates x_{n+1} = T x_n and stops at the first n with
/// p(x_n, x_{n+1}) <= tol, p(T x_n, x_n) <= tol and p(x_n, x_n) <= tol; x_n is
/// then certified. On spaces satisfying A2 and A3 the last two follow from the
/// first. Without a certificate the result carries the full trace and the last
/// step distance.
template <class Space, class Map>
SolveResult<typename Space::point_type> picard_solve(
    const Space& space, const Map& map, typename Space::point_type x0, double tol,
    std::size_t max_iter, std::optional<ContractionSpec> spec = std::nullopt) {
  if (!(tol > 0.0)) throw ArgumentError("picard_solve: tol must be positive");
  if (max_iter < 1) throw ArgumentError("picard_solve: max_iter must be >= 1");
  if (!space.contains(x0)) throw DomainError("picard_solve: x0 is outside the space");

  SolveResult<typename Space::point_type> result;
  auto& trace = result.trace;
  trace.spec = spec;
  trace.points.push_back(x0);
  auto x = x0;
  for (std::size_t n = 0; n < max_iter; ++n) {
    const auto next = map(x);
    if (!space.contains(next)) {
      throw DomainError("picard_solve: iterate left the space at step " + std::to_string(n + 1));
    }
    trace.points.push_back(next);
    TraceRow<typename Space::point_type> row;
    row.n = n;
    row.x = x;
    row.step_dist = space.p(x, next);
    row.self_dist = space.p(x, x);
    row.n_self = static_cast<double>(n) * row.self_dist;
    trace.rows.push_back(row);
    result.final_step = row.step_dist;

    if (row.step_dist <= tol) {
      const double residual = space.p(next, x);
      if (residual <= tol && row.self_dist <= tol) {
        ConvergenceCertificate<typename Space::point_type> cert;
        cert.fixed_point = x;
        cert.residual = residual;
        cert.self_distance = row.self_dist;
        cert.iterations = n;
        cert.mode = evidence_mode(space);
        result.certificate = std::move(cert);
        break;
      }
    }
    x = next;
  }
  detail::fill_bounds(space, trace);
  return result;
}

// ---------------------------------------------------------------------------
// Proof-derived bounds

struct BanachTailBound {
  double value = 0.0;  // p(x_0,x_1) sum_{i=n}^{m-1} (prod_{j=n}^{i} theta(x_j,x_m)) k^i
  double p01 = 0.0;
  std::vector<double> terms;         // summands for i = n..m-1, without the p01 factor
  std::vector<double> partial_sums;  // S_1..S_{m-1}, S_j = sum_{l=1}^{j} k^l prod_{i=1}^{l} theta(x_i,x_m)
  double series_bound = 0.0;         // p01 (S_{m-1} - S_n)
};

/// Evaluates the Banach-type tail bound on p(x_n, x_m) along a realized orbit
/// (`points` holds x_0, x_1, ...). Requires n < m < points.size().
template <class Space>
BanachTailBound banach_tail_bound(std::span<const typename Space::point_type> points,
                                  const Space& space, double k, std::size_t n, std::size_t m) {
  detail::require_unit_k(k, "banach_tail_bound");
  if (!(n < m) || m >= points.size()) {
    throw ArgumentError("banach_tail_bound: need n < m <= " +
                        std::to_string(points.empty() ? 0 : points.size() - 1) + ", got n=" +
                        std::to_string(n) + ", m=" + std::to_string(m));
  }
  BanachTailBound b;
  b.p01 = space.p(points[0], points[1]);
  double product = 1.0;
  double sum = 0.0;
  for (std::size_t i = n; i < m; ++i) {
    product *= space.theta(points[i], points[m]);
    const double term = product * std::pow(k, static_cast<double>(i));
    b.terms.push_back(term);
    sum += term;
  }
  b.value = b.p01 * sum;

  double s = 0.0;
  double prod = 1.0;
  for (std::size_t l = 1; l < m; ++l) {
    prod *= space.theta(points[l], points[m]);
    s += std::pow(k, static_cast<double>(l)) * prod;
    b.partial_sums.push_back(s);
  }
  const double s_last = b.partial_sums.empty() ? 0.0 : b.partial_sums.back();
  const double s_n = n == 0 ? 0.0 : b.partial_sums[n - 1];
  b.series_bound = b.p01 * (s_last - s_n);
  return b;
}

struct ModKannanBounds {
  double window_bound = 0.0;  // bounds p(x_{n+m}, x_n)
  double step_bound = 0.0;    // bounds p(x_{n+1}, x_n)
};

/// k^n p(x_1,x_0) + k sum_{t=1}^{n} k^(n-t) p(x_t,x_t). Needs n < points.size() and
/// at least two points.
template <class Space>
double modkannan_step_bound(std::span<const typename Space::point_type> points,
                            const Space& space, double k, std::size_t n) {
  detail::require_half_k(k, "modkannan_step_bound");
  if (points.size() < 2 || n >= points.size()) {
    throw ArgumentError("modkannan_step_bound: index " + std::to_string(n) +
                        " outside a trace of " + std::to_string(points.size()) + " points");
  }
  double sum = 0.0;
  for (std::size_t t = 1; t <= n; ++t) {
    sum += std::pow(k, static_cast<double>(n - t)) * space.p(points[t], points[t]);
  }
  return std::pow(k, static_cast<double>(n)) * space.p(points[1], points[0]) + k * sum;
}

/// window_bound = k^m p(x_n,x_n) + (1-k^(m+1))/(1-k) p(x_n,x_{n-1}) (n >= 1) and
/// the step bound at n.
template <class Space>
ModKannanBounds modkannan_bounds(std::span<const typename Space::point_type> points,
                                 const Space& space, double k, std::size_t n, std::size_t m) {
  detail::require_half_k(k, "modkannan_bounds");
  if (n == 0) throw ArgumentError("modkannan_bounds: window bound needs n >= 1 (uses x_{n-1})");
  ModKannanBounds b;
  b.step_bound = modkannan_step_bound(points, space, k, n);
  const double km = std::pow(k, static_cast<double>(m));
  b.window_bound = km * space.p(points[n], points[n]) +
                   (1.0 - km * k) / (1.0 - k) * space.p(points[n], points[n - 1]);
  return b;
}

// ---------------------------------------------------------------------------
// Uniqueness

template <class Point>
struct UniquenessReport {
  bool passed = true;
  std::vector<Point> fixed_points;
  double max_separation = 0.0;  // largest induced d_p between two fixed points
  std::optional<Point> failed_start;
  std::string detail;
};

/// Runs picard_solve from every start and compares the certified points with
/// the induced distance d_p (zero when the points coincide), both orders.
template <class Space, class Map>
UniquenessReport<typename Space::point_type> uniqueness_probe(
    const Space& space, const Map& map, std::span<const typename Space::point_type> starts,
    double tol, std::size_t max_iter) {
  if (starts.empty()) throw ArgumentError("uniqueness_probe: no starts");
  UniquenessReport<typename Space::point_type> r;
  for (const auto& s : starts) {
    const auto solved = picard_solve(space, map, s, tol, max_iter);
    if (!solved.converged()) {
      r.passed = false;
      r.failed_start = s;
      r.detail = "no certificate from start " + format_real(static_cast<double>(s)) +
                 " (last step " + format_real(solved.final_step) + ")";
      return r;
    }
    r.fixed_points.push_back(solved.certificate->fixed_point);
  }
  auto dp = [&](auto u, auto w) { return u == w ? 0.0 : space.p(u, w); };
  for (const auto& u : r.fixed_points) {
    for (const auto& w : r.fixed_points) r.max_separation = std::max(r.max_separation, dp(u, w));
  }
  r.passed = r.max_separation <= tol;
  r.detail = r.passed ? "all starts reach the same fixed point"
                      : "distinct fixed points, induced distance " + format_real(r.max_separation);
  return r;
}

// ---------------------------------------------------------------------------
// Orchestration used by the CLI and the gallery

struct SolveOptions {
  double tol = 1e-9;
  std::size_t max_iter = 10000;
  std::size_t grid_n = 41;
  std::size_t horizon = 64;
  AxiomProfile profile = AxiomProfile::pebm();
};

template <class Point>
struct CertifiedSolve {
  ContractionSpec spec;
  AxiomReport axioms;
  ContractionReport<Point> contraction;
  ThetaConditionReport<Point> theta;
  SolveResult<Point> solve;
  std::vector<Precondition> preconditions;

  bool preconditions_hold() const {
    for (const auto& p : preconditions) {
      if (!p.verified) return false;
    }
    return true;
  }
};

std::string describe_violation(const Violation& v);

/// Verifies the family's preconditions, then runs picard_solve regardless of
/// their outcome. The certificate (if any) lists every precondition.
template <class Space, class Map>
CertifiedSolve<typename Space::point_type> certified_solve(const Space& space, const Map& map,
                                                           const ContractionSpec& spec,
                                                           typename Space::point_type x0,
                                                           const SolveOptions& opt) {
  using Point = typename Space::point_type;
  CertifiedSolve<Point> out;
  out.spec = spec;
  const std::string mode = mode_name(evidence_mode(space));

  out.axioms = check_space(space, opt.profile, opt.grid_n);
  {
    std::string detail = mode + ", " + std::to_string(out.axioms.checks_run) + " checks";
    if (!out.axioms.passed) detail += "; first violation " + describe_violation(out.axioms.violations.front());
    out.preconditions.push_back({"axioms:" + opt.profile.tag(), out.axioms.passed, detail});
  }

  const auto pts = sample_points(space, opt.grid_n);
  const auto pairs = all_pairs<Point>(pts);
  out.contraction = verify_contraction(space, map, spec, std::span<const std::pair<Point, Point>>(pairs));
  out.preconditions.push_back(
      {"contraction:" + family_name(spec.family), out.contraction.passed,
       mode + ", worst ratio " + format_real(out.contraction.worst_ratio) + " vs k = " +
           format_real(spec.k)});

  out.theta = verify_theta_condition(space, map, spec, x0, opt.horizon, std::span<const Point>(pts));
  out.preconditions.push_back({"theta_condition", out.theta.passed,
                               "sup theta " + format_real(out.theta.observed_sup) +
                                   " vs 1/k = " + format_real(out.theta.limit)});

  out.solve = picard_solve(space, map, x0, opt.tol, opt.max_iter, spec);

  if (spec.family == ContractionFamily::kModifiedKannan) {
    const auto& rows = out.solve.trace.rows;
    const double last = rows.empty() ? 0.0 : rows.back().n_self;
    out.preconditions.push_back({"n_self_vanishes", last <= opt.tol,
                                 "finite-horizon n*p(x_n,x_n) = " + format_real(last) +
                                     " at n = " + std::to_string(rows.empty() ? 0 : rows.back().n)});
  }
  if (out.solve.certificate) out.solve.certificate->preconditions = out.preconditions;
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

nlohmann::json to_json(const ContractionSpec& spec);
nlohmann::json to_json(const Precondition& p);
nlohmann::json to_json(const BanachTailBound& b);
nlohmann::json to_json(const ModKannanBounds& b);

template <class Point>
nlohmann::json to_json(const ContractionReport<Point>& r) {
  nlohmann::json j{{"spec", to_json(r.spec)},
                   {"verdict", r.passed ? "pass" : "fail"},
                   {"worst_ratio", std::isfinite(r.worst_ratio) ? nlohmann::json(r.worst_ratio)
                                                                : nlohmann::json("inf")},
                   {"suggested_k", std::isfinite(r.worst_ratio) ? nlohmann::json(r.worst_ratio)
                                                                : nlohmann::json(nullptr)},
                   {"pairs_checked", r.pairs_checked},
                   {"hard_violations", r.hard_violations},
                   {"mode", mode_name(r.mode)}};
  if (r.witness) j["witness"] = {r.witness->first, r.witness->second};
  return j;
}

template <class Point>
nlohmann::json to_json(const ThetaConditionReport<Point>& r) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json("inf"); };
  nlohmann::json j{{"verdict", r.passed ? "pass" : "fail"},
                   {"observed_sup", num(r.observed_sup)},
                   {"limit", num(r.limit)},
                   {"margin", num(r.margin)},
                   {"horizon", r.horizon}};
  if (r.witness) j["witness"] = {r.witness->first, r.witness->second};
  return j;
}

template <class Point>
nlohmann::json to_json(const ConvergenceCertificate<Point>& c) {
  nlohmann::json pre = nlohmann::json::array();
  for (const auto& p : c.preconditions) pre.push_back(to_json(p));
  return {{"fixed_point", c.fixed_point},       {"residual", c.residual},
          {"self_distance", c.self_distance},   {"iterations", c.iterations},
          {"preconditions", pre},               {"unique_within_starts", c.unique_within_starts},
          {"mode", mode_name(c.mode)}};
}

template <class Point>
nlohmann::json to_json(const UniquenessReport<Point>& r) {
  nlohmann::json j{{"verdict", r.passed ? "pass" : "fail"},
                   {"fixed_points", r.fixed_points},
                   {"max_separation", r.max_separation},
                   {"detail", r.detail}};
  if (r.failed_start) j["failed_start"] = *r.failed_start;
  return j;
}

// Trace CSV: header n,x,step_dist,self_dist,bound,n_self.

inline constexpr const char* kTraceCsvHeader = "n,x,step_dist,self_dist,bound,n_self";

std::string csv_real(double v);

template <class Point>
std::string trace_to_csv(const IterationTrace<Point>& trace) {
  std::string out = kTraceCsvHeader;
  out += '\n';
  for (const auto& r : trace.rows) {
    out += std::to_string(r.n) + ',' + csv_real(static_cast<double>(r.x)) + ',' +
           csv_real(r.step_dist) + ',' + csv_real(r.self_dist) + ',' + csv_real(r.bound) + ',' +
           csv_real(r.n_self) + '\n';
  }
  return out;
}

/// Rows parsed back from trace CSV; x is kept as a real.
struct TraceCsvRow {
  std::size_t n = 0;
  double x = 0.0;
  double step_dist = 0.0;
  double self_dist = 0.0;
  double bound = 0.0;
  double n_self = 0.0;
};

/// Throws ConfigError on a wrong header or malformed row.
std::vector<TraceCsvRow> read_trace_csv(std::istream& in);

}  // namespace pebms
