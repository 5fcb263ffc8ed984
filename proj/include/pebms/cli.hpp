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
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace pebms::cli {

inline constexpr const char* kToolName = "pebms";
inline constexpr const char* kToolVersion = "0.1.0";

// Stable exit-code contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;         // axiom, precondition, bound or expectation
inline constexpr int kExitUsage = 2;           // usage, parse, schema
inline constexpr int kExitNoConvergence = 3;

/// Effective configuration of one invocation. Defaults are the documented ones.
struct RunConfig {
  std::string subcommand;
  std::string input;  // space file or gallery:<id>
  std::string profile;  // empty: the space's declared profile
  std::optional<double> s;
  double tol = 1e-9;
  std::size_t max_iter = 10000;
  std::size_t grid_n = 41;
  std::size_t horizon = 64;
  std::uint64_t seed = 42;
  std::string format = "json";

  // solve / bound
  std::string map;
  std::string family;
  std::optional<double> k;
  std::string x0;
  std::string trace_out;
  std::string cert_out;
  std::string trace_in;
  std::optional<std::size_t> bound_n;
  std::optional<std::size_t> bound_m;

  // fuzz
  std::size_t trials = 500;
  std::size_t n_min = 2;
  std::size_t n_max = 8;
  double factor = 0.9;
  std::string out_dir;
};

nlohmann::json to_json(const RunConfig& config);

/// 64-bit FNV-1a, printed as "fnv1a64:<16 hex digits>".
std::string input_digest(std::string_view bytes);

/// Runs one subcommand. `args` excludes the program name. Everything is written
/// to `out` / `err` in one piece at the end.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pebms::cli
