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

#include "pebms/fixed_point.hpp"

#include <charconv>
#include <istream>
#include <sstream>

namespace pebms {

using nlohmann::json;

std::string family_name(ContractionFamily f) {
  switch (f) {
    case ContractionFamily::kBanach: return "banach";
    case ContractionFamily::kKannan: return "kannan";
    case ContractionFamily::kModifiedKannan: return "modkannan";
  }
  return "banach";
}

ContractionFamily family_from_name(const std::string& name) {
  if (name == "banach") return ContractionFamily::kBanach;
  if (name == "kannan") return ContractionFamily::kKannan;
  if (name == "modkannan" || name == "modified_kannan") return ContractionFamily::kModifiedKannan;
  throw ArgumentError("unknown contraction family '" + name +
                      "' (expected banach, kannan, modkannan)");
}

ContractionSpec ContractionSpec::make(ContractionFamily family, double k) {
  if (family == ContractionFamily::kBanach) {
    detail::require_unit_k(k, "banach");
  } else {
    detail::require_half_k(k, family_name(family).c_str());
  }
  return {family, k};
}

std::string mode_name(EvidenceMode mode) {
  return mode == EvidenceMode::kExhaustive ? "exhaustive" : "grid";
}

namespace detail {

void require_unit_k(double k, const char* who) {
  if (!(k >= 0.0 && k < 1.0)) {
    throw ArgumentError(std::string(who) + ": k = " + format_real(k) + " is outside [0, 1)");
  }
}

void require_half_k(double k, const char* who) {
  if (!(k >= 0.0 && k < 0.5)) {
    throw ArgumentError(std::string(who) + ": k = " + format_real(k) + " is outside [0, 1/2)");
  }
}

}  // namespace detail

double kannan_step_bound(double k, std::size_t n, double p01) {
  detail::require_half_k(k, "kannan_step_bound");
  if (!(p01 >= 0.0)) throw ArgumentError("kannan_step_bound: p01 must be nonnegative");
  return std::pow(k / (1.0 - k), static_cast<double>(n)) * p01;
}

std::string describe_violation(const Violation& v) {
  std::string w;
  for (std::size_t i = 0; i < v.witness.size(); ++i) {
    if (i) w += ',';
    w += v.points.empty() ? std::to_string(v.witness[i]) : format_real(v.points[i]);
  }
  return axiom_name(v.axiom) + " at (" + w + "): lhs " + format_real(v.lhs) + ", rhs " +
         format_real(v.rhs);
}

json to_json(const ContractionSpec& spec) {
  return {{"family", family_name(spec.family)}, {"k", spec.k}};
}

json to_json(const Precondition& p) {
  return {{"name", p.name}, {"verified", p.verified}, {"detail", p.detail}};
}

json to_json(const BanachTailBound& b) {
  return {{"value", b.value},
          {"p01", b.p01},
          {"terms", b.terms},
          {"partial_sums", b.partial_sums},
          {"series_bound", b.series_bound}};
}

json to_json(const ModKannanBounds& b) {
  return {{"window_bound", b.window_bound}, {"step_bound", b.step_bound}};
}

std::string csv_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_real(v);
}

namespace {

double parse_csv_real(const std::string& field, std::size_t line) {
  if (field == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (field == "inf") return std::numeric_limits<double>::infinity();
  if (field == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ConfigError("trace CSV line " + std::to_string(line) + ": bad number '" + field + "'");
  }
  return v;
}

}  // namespace

std::vector<TraceCsvRow> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTraceCsvHeader) {
    throw ConfigError(std::string("trace CSV must start with header '") + kTraceCsvHeader + "'");
  }
  std::vector<TraceCsvRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != 6) {
      throw ConfigError("trace CSV line " + std::to_string(lineno) + ": expected 6 fields");
    }
    TraceCsvRow r;
    r.n = static_cast<std::size_t>(parse_csv_real(fields[0], lineno));
    r.x = parse_csv_real(fields[1], lineno);
    r.step_dist = parse_csv_real(fields[2], lineno);
    r.self_dist = parse_csv_real(fields[3], lineno);
    r.bound = parse_csv_real(fields[4], lineno);
    r.n_self = parse_csv_real(fields[5], lineno);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace pebms
