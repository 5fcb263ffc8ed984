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

#include <stdexcept>
#include <string>

namespace pebms {

// Point outside the space's point set or interval.
class DomainError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Bad argument value (counts, indices, constants out of range).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Profile requests data the space does not carry, or a malformed space.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// minimal_theta on a distance matrix no control function can repair.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unknown gallery id.
class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Expression text that does not parse, or refers to unknown names.
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace pebms
