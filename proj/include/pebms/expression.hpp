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

#include <map>
#include <memory>
#include <string>
#include <string_view>

namespace pebms {

/// Closed-form real expression over the variables `x`, `y` and named
/// parameters. The grammar is deliberately small:
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' unary)?
///   primary := number | name | func '(' expr (',' expr)* ')' | '(' expr ')'
///   func    := abs | max | min
///
/// Parameters are substituted when the expression is parsed, so evaluation
/// only sees `x` and `y`.
class Expression {
 public:
  using Params = std::map<std::string, double>;

  Expression() = default;

  static Expression parse(std::string_view text, const Params& params = {});

  double operator()(double x, double y = 0.0) const;

  const std::string& source() const noexcept { return source_; }
  bool uses_y() const noexcept { return uses_y_; }
  bool empty() const noexcept { return root_ == nullptr; }

  struct Node;

 private:
  std::string source_;
  std::shared_ptr<const Node> root_;
  bool uses_y_ = false;
};

}  // namespace pebms
