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

#include "pebms/sequence_diagnostics.hpp"

#include <utility>

namespace pebms {

FiniteMap::FiniteMap(std::vector<std::size_t> table, std::string description)
    : table_(std::move(table)), description_(std::move(description)) {
  for (std::size_t i = 0; i < table_.size(); ++i) {
    if (table_[i] >= table_.size()) {
      throw ConfigError("map sends point " + std::to_string(i) + " to " +
                        std::to_string(table_[i]) + ", outside a " +
                        std::to_string(table_.size()) + "-point space");
    }
  }
  if (description_.empty()) description_ = "table map";
}

std::size_t FiniteMap::operator()(std::size_t i) const {
  if (i >= table_.size()) {
    throw DomainError("x = " + std::to_string(i) + " is not a point of the map's space");
  }
  return table_[i];
}

AnalyticMap::AnalyticMap(std::string expression, Interval domain, Expression::Params params,
                         std::string description)
    : expr_(Expression::parse(expression, params)),
      domain_(domain),
      description_(std::move(description)) {
  if (expr_.uses_y()) throw ConfigError("map expression '" + expression + "' may only use x");
  constexpr std::size_t kProbe = 65;
  for (double x : grid_points(domain_, kProbe)) {
    const double y = expr_(x);
    if (!domain_.contains(y)) {
      throw ConfigError("map '" + expression + "' sends " + format_real(x) + " to " +
                        format_real(y) + ", outside [" + format_real(domain_.lo) + ", " +
                        format_real(domain_.hi) + "]");
    }
  }
  if (description_.empty()) description_ = "T(x) = " + expression;
}

nlohmann::json to_json(const ConvergenceVerdict& v) {
  nlohmann::json j{{"verdict", v.passed ? "pass" : "fail"},
                   {"discrepancy", v.discrepancy},
                   {"tail_non_increasing", v.tail_non_increasing},
                   {"tail_start", v.tail_start},
                   {"limit_self_distance", v.limit_self_distance}};
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

nlohmann::json to_json(const CauchyEstimate& c) {
  return {{"estimate", c.estimate}, {"spread", c.spread}};
}

}  // namespace pebms
