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

#include "pebms/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <utility>
#include <vector>

#include "pebms/errors.hpp"

namespace pebms {

struct Expression::Node {
  enum class Kind { kConstant, kX, kY, kNeg, kAdd, kSub, kMul, kDiv, kPow, kAbs, kMax, kMin };

  Kind kind = Kind::kConstant;
  double value = 0.0;
  std::vector<std::shared_ptr<const Node>> args;

  double eval(double x, double y) const {
    switch (kind) {
      case Kind::kConstant: return value;
      case Kind::kX: return x;
      case Kind::kY: return y;
      case Kind::kNeg: return -args[0]->eval(x, y);
      case Kind::kAdd: return args[0]->eval(x, y) + args[1]->eval(x, y);
      case Kind::kSub: return args[0]->eval(x, y) - args[1]->eval(x, y);
      case Kind::kMul: return args[0]->eval(x, y) * args[1]->eval(x, y);
      case Kind::kDiv: return args[0]->eval(x, y) / args[1]->eval(x, y);
      case Kind::kPow: return std::pow(args[0]->eval(x, y), args[1]->eval(x, y));
      case Kind::kAbs: return std::fabs(args[0]->eval(x, y));
      case Kind::kMax: {
        double m = args[0]->eval(x, y);
        for (std::size_t i = 1; i < args.size(); ++i) m = std::fmax(m, args[i]->eval(x, y));
        return m;
      }
      case Kind::kMin: {
        double m = args[0]->eval(x, y);
        for (std::size_t i = 1; i < args.size(); ++i) m = std::fmin(m, args[i]->eval(x, y));
        return m;
      }
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind kind, std::vector<NodePtr> args = {}, double value = 0.0) {
  auto node = std::make_shared<Expression::Node>();
  node->kind = kind;
  node->value = value;
  node->args = std::move(args);
  return node;
}

class Parser {
 public:
  Parser(std::string_view text, const Expression::Params& params) : text_(text), params_(params) {}

  NodePtr parse_all() {
    NodePtr root = parse_expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return root;
  }

  bool uses_y() const { return uses_y_; }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("expression \"" + std::string(text_) + "\" at offset " + std::to_string(pos_) +
                     ": " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = make(Kind::kAdd, {lhs, parse_term()});
      } else if (accept('-')) {
        lhs = make(Kind::kSub, {lhs, parse_term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(Kind::kMul, {lhs, parse_unary()});
      } else if (accept('/')) {
        lhs = make(Kind::kDiv, {lhs, parse_unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return make(Kind::kNeg, {parse_unary()});
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (accept('^')) return make(Kind::kPow, {base, parse_unary()});
    return base;
  }

  NodePtr parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_name();
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr parse_number() {
    double value = 0.0;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc()) fail("malformed number");
    pos_ += static_cast<std::size_t>(ptr - first);
    return make(Kind::kConstant, {}, value);
  }

  NodePtr parse_name() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string name(text_.substr(start, pos_ - start));

    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      Kind kind;
      if (name == "abs") {
        kind = Kind::kAbs;
      } else if (name == "max") {
        kind = Kind::kMax;
      } else if (name == "min") {
        kind = Kind::kMin;
      } else {
        pos_ = start;
        fail("unknown function '" + name + "'");
      }
      ++pos_;
      std::vector<NodePtr> args{parse_expr()};
      while (accept(',')) args.push_back(parse_expr());
      expect(')');
      if (kind == Kind::kAbs && args.size() != 1) fail("abs takes one argument");
      if (kind != Kind::kAbs && args.size() < 2) fail(name + " takes at least two arguments");
      return make(kind, std::move(args));
    }

    if (name == "x") return make(Kind::kX);
    if (name == "y") {
      uses_y_ = true;
      return make(Kind::kY);
    }
    if (auto it = params_.find(name); it != params_.end()) {
      return make(Kind::kConstant, {}, it->second);
    }
    pos_ = start;
    fail("unknown name '" + name + "'");
  }

  std::string_view text_;
  const Expression::Params& params_;
  std::size_t pos_ = 0;
  bool uses_y_ = false;
};

}  // namespace

Expression Expression::parse(std::string_view text, const Params& params) {
  Parser parser(text, params);
  Expression e;
  e.root_ = parser.parse_all();
  e.source_ = std::string(text);
  e.uses_y_ = parser.uses_y();
  return e;
}

double Expression::operator()(double x, double y) const {
  if (!root_) throw ConfigError("evaluating an empty expression");
  return root_->eval(x, y);
}

}  // namespace pebms
