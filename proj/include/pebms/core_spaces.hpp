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
#include <variant>
#include <vector>

#include "json.hpp"
#include "pebms/expression.hpp"

namespace pebms {

/// Closed real interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
  bool operator==(const Interval&) const = default;
};

/// Dense square matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }

  std::vector<std::vector<double>> rows() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Which axiom family a space claims (or is checked against).
struct AxiomProfile {
  enum class Kind {
    kMetric,
    kBMetric,
    kExtendedBMetric,
    kPartialMetric,
    kPartialBMetric,
    kPartialExtendedBMetric,
  };

  Kind kind = Kind::kPartialExtendedBMetric;
  double s = 1.0;  // only meaningful for kBMetric / kPartialBMetric

  static AxiomProfile metric() { return {Kind::kMetric, 1.0}; }
  static AxiomProfile b_metric(double s);
  static AxiomProfile ebm() { return {Kind::kExtendedBMetric, 1.0}; }
  static AxiomProfile partial_metric() { return {Kind::kPartialMetric, 1.0}; }
  static AxiomProfile pbm(double s);
  static AxiomProfile pebm() { return {Kind::kPartialExtendedBMetric, 1.0}; }

  /// Parses "metric", "b_metric", "ebm", "partial_metric", "pbm", "pebm".
  /// b_metric and pbm need `s`.
  static AxiomProfile from_tag(const std::string& tag, std::optional<double> s = std::nullopt);

  std::string tag() const;

  /// Self-distance may be nonzero and the triangle clause carries -p(y,y).
  bool is_partial() const noexcept;
  /// Triangle coefficient comes from the space's Theta rather than a constant.
  bool uses_control_matrix() const noexcept;
  /// Triangle coefficient for profiles that do not use Theta (1 or s).
  double constant_coefficient() const noexcept;

  bool operator==(const AxiomProfile&) const = default;
};

/// n labeled points, distance matrix P and (optional) control matrix Theta.
///
/// Points are indices; labels are display only. A space sampled from an
/// AnalyticSpace also remembers the real coordinate of each index.
class FiniteSpace {
 public:
  using point_type = std::size_t;

  FiniteSpace(std::vector<std::string> labels, Matrix distances, std::optional<Matrix> control,
              AxiomProfile declared, std::vector<double> coordinates = {});

  std::size_t size() const noexcept { return p_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const Matrix& distances() const noexcept { return p_; }
  const std::optional<Matrix>& control() const noexcept { return theta_; }
  bool has_control() const noexcept { return theta_.has_value(); }
  const AxiomProfile& declared() const noexcept { return declared_; }
  const std::vector<double>& coordinates() const noexcept { return coords_; }

  bool contains(point_type i) const noexcept { return i < size(); }
  double p(point_type i, point_type j) const;
  double theta(point_type i, point_type j) const;

  /// Same points, a different control matrix.
  FiniteSpace with_control(Matrix control) const;
  FiniteSpace with_declared(AxiomProfile declared) const;
  /// Restriction to the listed indices, in the listed order.
  FiniteSpace subspace(const std::vector<point_type>& keep) const;

  bool operator==(const FiniteSpace&) const = default;

 private:
  void check_index(point_type i, const char* coordinate) const;

  std::vector<std::string> labels_;
  Matrix p_;
  std::optional<Matrix> theta_;
  AxiomProfile declared_;
  std::vector<double> coords_;
};

/// Distance and control given in closed form over a real interval.
class AnalyticSpace {
 public:
  using point_type = double;

  AnalyticSpace(Interval domain, std::string p_form, std::string theta_form,
                Expression::Params params = {}, AxiomProfile declared = AxiomProfile::pebm());

  const Interval& domain() const noexcept { return domain_; }
  const std::string& p_form() const noexcept { return p_.source(); }
  const std::string& theta_form() const noexcept { return theta_.source(); }
  const Expression::Params& params() const noexcept { return params_; }
  const AxiomProfile& declared() const noexcept { return declared_; }

  bool contains(point_type x) const noexcept { return domain_.contains(x); }
  double p(point_type x, point_type y) const;
  double theta(point_type x, point_type y) const;

 private:
  void check_point(point_type v, const char* coordinate) const;

  Interval domain_;
  Expression p_;
  Expression theta_;
  Expression::Params params_;
  AxiomProfile declared_;
};

using AnySpace = std::variant<FiniteSpace, AnalyticSpace>;

template <class Space>
double eval_p(const Space& space, typename Space::point_type x, typename Space::point_type y) {
  return space.p(x, y);
}

template <class Space>
double eval_theta(const Space& space, typename Space::point_type x,
                  typename Space::point_type y) {
  return space.theta(x, y);
}

/// d_p: zero on the diagonal, P elsewhere, same Theta, declared EBM.
FiniteSpace induced_ebm(const FiniteSpace& space);

/// n uniformly spaced points of [lo, hi], both endpoints included.
std::vector<double> grid_points(const Interval& domain, std::size_t n);

/// FiniteSpace on grid_points(domain, n) with P and Theta evaluated in closed form.
FiniteSpace sample_grid(const AnalyticSpace& space, std::size_t n);

/// Shortest decimal text that round-trips to the same double.
std::string format_real(double v);

/// Writes "profile" (and "s" where the profile carries one) into `obj`.
void put_profile(nlohmann::json& obj, const AxiomProfile& profile);
/// Reads "profile"/"s" from `obj`; `fallback` when "profile" is absent.
AxiomProfile get_profile(const nlohmann::json& obj, const AxiomProfile& fallback);

/// Finite spaces also carry "coordinates" when they were sampled from an interval.
nlohmann::json space_to_json(const FiniteSpace& space);
nlohmann::json space_to_json(const AnalyticSpace& space);
nlohmann::json space_to_json(const AnySpace& space);
/// Throws ConfigError on schema problems.
AnySpace space_from_json(const nlohmann::json& j);

}  // namespace pebms
