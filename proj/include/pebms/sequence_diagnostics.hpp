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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "pebms/core_spaces.hpp"
#include "pebms/errors.hpp"
#include "pebms/expression.hpp"

namespace pebms {

template <class Point>
struct PointSequence {
  std::vector<Point> terms;
  std::string generator;

  std::size_t size() const noexcept { return terms.size(); }
  bool operator==(const PointSequence&) const = default;
};

/// Self-map of a finite space given as a lookup table i -> table[i].
class FiniteMap {
 public:
  using point_type = std::size_t;

  explicit FiniteMap(std::vector<std::size_t> table, std::string description = "");

  std::size_t operator()(std::size_t i) const;
  bool contains(std::size_t i) const noexcept { return i < table_.size(); }
  const std::vector<std::size_t>& table() const noexcept { return table_; }
  const std::string& description() const noexcept { return description_; }

 private:
  std::vector<std::size_t> table_;
  std::string description_;
};

/// Self-map of a real interval given by an expression in x. Construction
/// checks that a sample of the domain is mapped into the domain.
class AnalyticMap {
 public:
  using point_type = double;

  AnalyticMap(std::string expression, Interval domain, Expression::Params params = {},
              std::string description = "");

  double operator()(double x) const { return expr_(x); }
  bool contains(double x) const noexcept { return domain_.contains(x); }
  const Interval& domain() const noexcept { return domain_; }
  const std::string& source() const noexcept { return expr_.source(); }
  const std::string& description() const noexcept { return description_; }

 private:
  Expression expr_;
  Interval domain_;
  std::string description_;
};

using AnyMap = std::variant<FiniteMap, AnalyticMap>;

/// [x0, T x0, ..., T^n x0]. Throws DomainError naming the step if the orbit
/// leaves the domain.
template <class Map>
PointSequence<typename Map::point_type> orbit(const Map& map, typename Map::point_type x0,
                                              std::size_t n) {
  if (!map.contains(x0)) throw DomainError("orbit start is outside the map's domain");
  PointSequence<typename Map::point_type> seq;
  seq.generator = "orbit of " + map.description();
  seq.terms.reserve(n + 1);
  seq.terms.push_back(x0);
  for (std::size_t step = 1; step <= n; ++step) {
    const auto next = map(seq.terms.back());
    if (!map.contains(next)) {
      throw DomainError("orbit left the domain at step " + std::to_string(step));
    }
    seq.terms.push_back(next);
  }
  return seq;
}

struct ConvergenceVerdict {
  bool passed = false;
  double discrepancy = 0.0;       // |p(x_N, x) - p(x, x)| at the last index
  bool tail_non_increasing = false;
  std::size_t tail_start = 0;     // first index of the final quarter
  double limit_self_distance = 0.0;
  std::string note;
};

/// Windowed judgment of lim p(x_n, x) = p(x, x). Passes when the last
/// discrepancy is within tol and the discrepancies do not increase over the
/// final quarter of the sequence.
template <class Space>
ConvergenceVerdict converges_to(const Space& space,
                                const PointSequence<typename Space::point_type>& seq,
                                typename Space::point_type x, double tol) {
  if (seq.terms.empty()) throw ArgumentError("converges_to: empty sequence");
  if (!(tol > 0.0)) throw ArgumentError("converges_to: tol must be positive");

  const double self = space.p(x, x);
  const std::size_t n = seq.size();
  std::vector<double> gap(n);
  for (std::size_t i = 0; i < n; ++i) gap[i] = std::fabs(space.p(seq.terms[i], x) - self);

  ConvergenceVerdict v;
  v.discrepancy = gap.back();
  v.limit_self_distance = self;
  v.tail_start = (3 * n) / 4;
  v.tail_non_increasing = true;
  for (std::size_t i = v.tail_start; i + 1 < n; ++i) {
    if (gap[i + 1] > gap[i]) {
      v.tail_non_increasing = false;
      break;
    }
  }
  v.passed = v.discrepancy <= tol && v.tail_non_increasing;
  if (v.passed && self > 0.0) {
    v.note = "candidate limit has positive self-distance; limits under a partial distance "
             "need not be unique";
  }
  return v;
}

namespace detail {

template <class Space, class Fn>
void for_tail_pairs(const Space& space, const PointSequence<typename Space::point_type>& seq,
                    std::size_t window, Fn&& fn) {
  if (window < 2) throw ArgumentError("window must be at least 2");
  if (window > seq.size()) {
    throw ArgumentError("window " + std::to_string(window) + " exceeds sequence length " +
                        std::to_string(seq.size()));
  }
  const std::size_t start = seq.size() - window;
  for (std::size_t a = start; a < seq.size(); ++a) {
    for (std::size_t b = start; b < seq.size(); ++b) fn(space.p(seq.terms[a], seq.terms[b]));
  }
}

}  // namespace detail

/// max p(x_n, x_m) over all pairs (n = m included) of the last `window` terms.
/// The sequence is 0-Cauchy at tol when this is <= tol.
template <class Space>
double zero_cauchy_tail(const Space& space, const PointSequence<typename Space::point_type>& seq,
                        std::size_t window) {
  double worst = 0.0;
  detail::for_tail_pairs(space, seq, window, [&](double v) { worst = std::max(worst, v); });
  return worst;
}

struct CauchyEstimate {
  double estimate = 0.0;  // mean of the tail pair distances
  double spread = 0.0;    // max - min of the same values
};

/// Cauchy at tol when spread <= tol; the common value need not be 0.
template <class Space>
CauchyEstimate cauchy_tail(const Space& space, const PointSequence<typename Space::point_type>& seq,
                           std::size_t window) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  std::size_t count = 0;
  detail::for_tail_pairs(space, seq, window, [&](double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    sum += v;
    ++count;
  });
  return {sum / static_cast<double>(count), hi - lo};
}

nlohmann::json to_json(const ConvergenceVerdict& v);
nlohmann::json to_json(const CauchyEstimate& c);

template <class Point>
nlohmann::json to_json(const PointSequence<Point>& seq) {
  return nlohmann::json(seq.terms);
}

}  // namespace pebms
