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

#include "pebms/core_spaces.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <utility>

#include "pebms/errors.hpp"

namespace pebms {

using nlohmann::json;

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) {
      throw ConfigError("matrix is not square: row " + std::to_string(i) + " has " +
                        std::to_string(rows[i].size()) + " entries, expected " +
                        std::to_string(rows.size()));
    }
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

std::vector<std::vector<double>> Matrix::rows() const {
  std::vector<std::vector<double>> out(n_, std::vector<double>(n_));
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) out[i][j] = (*this)(i, j);
  }
  return out;
}

// ---------------------------------------------------------------------------
// AxiomProfile

AxiomProfile AxiomProfile::b_metric(double s) {
  if (!(s >= 1.0)) throw ArgumentError("b-metric coefficient s must be >= 1");
  return {Kind::kBMetric, s};
}

AxiomProfile AxiomProfile::pbm(double s) {
  if (!(s >= 1.0)) throw ArgumentError("partial b-metric coefficient s must be >= 1");
  return {Kind::kPartialBMetric, s};
}

AxiomProfile AxiomProfile::from_tag(const std::string& tag, std::optional<double> s) {
  if (tag == "metric") return metric();
  if (tag == "ebm") return ebm();
  if (tag == "partial_metric") return partial_metric();
  if (tag == "pebm") return pebm();
  if (tag == "b_metric" || tag == "pbm") {
    if (!s) throw ConfigError("profile '" + tag + "' requires a coefficient s");
    return tag == "pbm" ? pbm(*s) : b_metric(*s);
  }
  throw ConfigError("unknown profile tag '" + tag +
                    "' (expected metric, b_metric, ebm, partial_metric, pbm, pebm)");
}

std::string AxiomProfile::tag() const {
  switch (kind) {
    case Kind::kMetric: return "metric";
    case Kind::kBMetric: return "b_metric";
    case Kind::kExtendedBMetric: return "ebm";
    case Kind::kPartialMetric: return "partial_metric";
    case Kind::kPartialBMetric: return "pbm";
    case Kind::kPartialExtendedBMetric: return "pebm";
  }
  return "pebm";
}

bool AxiomProfile::is_partial() const noexcept {
  return kind == Kind::kPartialMetric || kind == Kind::kPartialBMetric ||
         kind == Kind::kPartialExtendedBMetric;
}

bool AxiomProfile::uses_control_matrix() const noexcept {
  return kind == Kind::kExtendedBMetric || kind == Kind::kPartialExtendedBMetric;
}

double AxiomProfile::constant_coefficient() const noexcept {
  if (kind == Kind::kBMetric || kind == Kind::kPartialBMetric) return s;
  return 1.0;
}

// ---------------------------------------------------------------------------
// FiniteSpace

FiniteSpace::FiniteSpace(std::vector<std::string> labels, Matrix distances,
                         std::optional<Matrix> control, AxiomProfile declared,
                         std::vector<double> coordinates)
    : labels_(std::move(labels)),
      p_(std::move(distances)),
      theta_(std::move(control)),
      declared_(declared),
      coords_(std::move(coordinates)) {
  const std::size_t n = p_.size();
  if (labels_.size() != n) {
    throw ConfigError("space has " + std::to_string(labels_.size()) + " labels but P is " +
                      std::to_string(n) + "x" + std::to_string(n));
  }
  if (theta_ && theta_->size() != n) {
    throw ConfigError("Theta dimension " + std::to_string(theta_->size()) +
                      " does not match P dimension " + std::to_string(n));
  }
  if (!coords_.empty() && coords_.size() != n) {
    throw ConfigError("coordinate count does not match point count");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = p_(i, j);
      if (!std::isfinite(v) || v < 0.0) {
        throw ConfigError("P(" + std::to_string(i) + "," + std::to_string(j) + ") = " +
                          format_real(v) + " is not a finite nonnegative real");
      }
      if (theta_) {
        const double t = (*theta_)(i, j);
        if (!std::isfinite(t) || t < 1.0) {
          throw ConfigError("Theta(" + std::to_string(i) + "," + std::to_string(j) + ") = " +
                            format_real(t) + " is not a finite real >= 1");
        }
      }
    }
  }
}

void FiniteSpace::check_index(point_type i, const char* coordinate) const {
  if (i >= size()) {
    throw DomainError(std::string(coordinate) + " = " + std::to_string(i) +
                      " is not a point index of a " + std::to_string(size()) + "-point space");
  }
}

double FiniteSpace::p(point_type i, point_type j) const {
  check_index(i, "x");
  check_index(j, "y");
  return p_(i, j);
}

double FiniteSpace::theta(point_type i, point_type j) const {
  check_index(i, "x");
  check_index(j, "y");
  if (!theta_) throw ConfigError("space carries no Theta matrix");
  return (*theta_)(i, j);
}

FiniteSpace FiniteSpace::with_control(Matrix control) const {
  return FiniteSpace(labels_, p_, std::move(control), declared_, coords_);
}

FiniteSpace FiniteSpace::with_declared(AxiomProfile declared) const {
  return FiniteSpace(labels_, p_, theta_, declared, coords_);
}

FiniteSpace FiniteSpace::subspace(const std::vector<point_type>& keep) const {
  const std::size_t m = keep.size();
  std::vector<std::string> labels;
  std::vector<double> coords;
  Matrix p(m);
  std::optional<Matrix> theta;
  if (theta_) theta.emplace(m);
  for (std::size_t a = 0; a < m; ++a) {
    check_index(keep[a], "index");
    labels.push_back(labels_[keep[a]]);
    if (!coords_.empty()) coords.push_back(coords_[keep[a]]);
    for (std::size_t b = 0; b < m; ++b) {
      p(a, b) = p_(keep[a], keep[b]);
      if (theta) (*theta)(a, b) = (*theta_)(keep[a], keep[b]);
    }
  }
  return FiniteSpace(std::move(labels), std::move(p), std::move(theta), declared_,
                     std::move(coords));
}

// ---------------------------------------------------------------------------
// AnalyticSpace

AnalyticSpace::AnalyticSpace(Interval domain, std::string p_form, std::string theta_form,
                             Expression::Params params, AxiomProfile declared)
    : domain_(domain),
      p_(Expression::parse(p_form, params)),
      theta_(Expression::parse(theta_form, params)),
      params_(std::move(params)),
      declared_(declared) {
  if (!std::isfinite(domain_.lo) || !std::isfinite(domain_.hi) || !(domain_.lo < domain_.hi)) {
    throw ConfigError("domain [" + format_real(domain_.lo) + ", " + format_real(domain_.hi) +
                      "] is not a bounded interval with lo < hi");
  }
  constexpr std::size_t kProbe = 17;
  const auto pts = grid_points(domain_, kProbe);
  for (double x : pts) {
    for (double y : pts) {
      const double pv = p_(x, y);
      if (!std::isfinite(pv) || pv < 0.0) {
        throw ConfigError("p_form '" + p_form + "' gives " + format_real(pv) + " at (" +
                          format_real(x) + ", " + format_real(y) + ")");
      }
      const double tv = theta_(x, y);
      if (!std::isfinite(tv) || tv < 1.0) {
        throw ConfigError("theta_form '" + theta_form + "' gives " + format_real(tv) + " at (" +
                          format_real(x) + ", " + format_real(y) + ")");
      }
    }
  }
}

void AnalyticSpace::check_point(point_type v, const char* coordinate) const {
  if (!domain_.contains(v)) {
    throw DomainError(std::string(coordinate) + " = " + format_real(v) + " is outside [" +
                      format_real(domain_.lo) + ", " + format_real(domain_.hi) + "]");
  }
}

double AnalyticSpace::p(point_type x, point_type y) const {
  check_point(x, "x");
  check_point(y, "y");
  return p_(x, y);
}

double AnalyticSpace::theta(point_type x, point_type y) const {
  check_point(x, "x");
  check_point(y, "y");
  return theta_(x, y);
}

// ---------------------------------------------------------------------------

FiniteSpace induced_ebm(const FiniteSpace& space) {
  Matrix d = space.distances();
  for (std::size_t i = 0; i < d.size(); ++i) d(i, i) = 0.0;
  return FiniteSpace(space.labels(), std::move(d), space.control(), AxiomProfile::ebm(),
                     space.coordinates());
}

std::vector<double> grid_points(const Interval& domain, std::size_t n) {
  if (n < 2) throw ArgumentError("grid needs n >= 2 points, got " + std::to_string(n));
  std::vector<double> pts(n);
  const double width = domain.hi - domain.lo;
  for (std::size_t i = 0; i < n; ++i) {
    pts[i] = domain.lo + width * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  pts.back() = domain.hi;
  return pts;
}

FiniteSpace sample_grid(const AnalyticSpace& space, std::size_t n) {
  const auto pts = grid_points(space.domain(), n);
  Matrix p(n);
  Matrix theta(n);
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back(format_real(pts[i]));
    for (std::size_t j = 0; j < n; ++j) {
      p(i, j) = space.p(pts[i], pts[j]);
      theta(i, j) = space.theta(pts[i], pts[j]);
    }
  }
  return FiniteSpace(std::move(labels), std::move(p), std::move(theta), space.declared(), pts);
}

std::string format_real(double v) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) return "?";
  return std::string(buf.data(), ptr);
}

// ---------------------------------------------------------------------------
// JSON

void put_profile(json& obj, const AxiomProfile& profile) {
  obj["profile"] = profile.tag();
  if (profile.kind == AxiomProfile::Kind::kBMetric ||
      profile.kind == AxiomProfile::Kind::kPartialBMetric) {
    obj["s"] = profile.s;
  }
}

AxiomProfile get_profile(const json& obj, const AxiomProfile& fallback) {
  if (!obj.contains("profile")) return fallback;
  std::optional<double> s;
  if (obj.contains("s")) s = obj.at("s").get<double>();
  return AxiomProfile::from_tag(obj.at("profile").get<std::string>(), s);
}

json space_to_json(const FiniteSpace& space) {
  json j;
  j["kind"] = "finite";
  put_profile(j, space.declared());
  j["labels"] = space.labels();
  j["P"] = space.distances().rows();
  if (space.control()) j["Theta"] = space.control()->rows();
  if (!space.coordinates().empty()) j["coordinates"] = space.coordinates();
  return j;
}

json space_to_json(const AnalyticSpace& space) {
  json j;
  j["kind"] = "analytic";
  put_profile(j, space.declared());
  j["domain"] = {space.domain().lo, space.domain().hi};
  j["p_form"] = space.p_form();
  j["theta_form"] = space.theta_form();
  j["params"] = json::object();
  for (const auto& [name, value] : space.params()) j["params"][name] = value;
  return j;
}

json space_to_json(const AnySpace& space) {
  return std::visit([](const auto& s) { return space_to_json(s); }, space);
}

namespace {

std::vector<std::vector<double>> read_rows(const json& j, const char* key) {
  const json& m = j.at(key);
  if (!m.is_array()) throw ConfigError(std::string("'") + key + "' must be an array of rows");
  std::vector<std::vector<double>> rows;
  for (const auto& row : m) {
    if (!row.is_array()) throw ConfigError(std::string("'") + key + "' rows must be arrays");
    rows.push_back(row.get<std::vector<double>>());
  }
  return rows;
}

}  // namespace

AnySpace space_from_json(const json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "finite") {
      Matrix p = Matrix::from_rows(read_rows(j, "P"));
      std::optional<Matrix> theta;
      if (j.contains("Theta")) theta = Matrix::from_rows(read_rows(j, "Theta"));
      std::vector<std::string> labels;
      if (j.contains("labels")) {
        for (const auto& l : j.at("labels")) {
          labels.push_back(l.is_string() ? l.get<std::string>() : l.dump());
        }
      } else {
        for (std::size_t i = 0; i < p.size(); ++i) labels.push_back(std::to_string(i));
      }
      std::vector<double> coords;
      if (j.contains("coordinates")) coords = j.at("coordinates").get<std::vector<double>>();
      return FiniteSpace(std::move(labels), std::move(p), std::move(theta),
                         get_profile(j, AxiomProfile::pebm()), std::move(coords));
    }
    if (kind == "analytic") {
      const auto dom = j.at("domain").get<std::vector<double>>();
      if (dom.size() != 2) throw ConfigError("'domain' must be [a, b]");
      Expression::Params params;
      if (j.contains("params")) params = j.at("params").get<Expression::Params>();
      return AnalyticSpace(Interval{dom[0], dom[1]}, j.at("p_form").get<std::string>(),
                           j.at("theta_form").get<std::string>(), std::move(params),
                           get_profile(j, AxiomProfile::pebm()));
    }
    throw ConfigError("unknown space kind '" + kind + "' (expected finite or analytic)");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("space JSON: ") + e.what());
  }
}

}  // namespace pebms
