#pragma once

// Arithmetic expressions over chart coordinates.
//
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := base ("^" int)?
//   base   := number | ident | func "(" expr ")" | "(" expr ")" | "-" base
//   func   := "sin" | "cos" | "exp"
//
// Note that "-x^2" parses as (-x)^2 under this grammar.

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nlg/smooth.hpp"

namespace nlg {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownIdentifier : public std::runtime_error {
 public:
  explicit UnknownIdentifier(std::string name)
      : std::runtime_error("unknown identifier '" + name + "'"), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

enum class ExprKind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp };

struct ExprNode {
  ExprKind kind = ExprKind::Number;
  double number = 0.0;  // Number
  int var = -1;         // Var: chart coordinate index
  std::string name;     // Var: label as written
  int exponent = 0;     // Pow
  std::shared_ptr<const ExprNode> lhs;  // unary operand / left operand
  std::shared_ptr<const ExprNode> rhs;
};

class Expr {
 public:
  Expr() = default;
  explicit Expr(std::shared_ptr<const ExprNode> root) : root_(std::move(root)) {}

  const ExprNode& root() const { return *root_; }
  bool empty() const { return root_ == nullptr; }

  template <class T>
  T eval(std::span<const T> x) const {
    return eval_node<T>(*root_, x);
  }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  template <class T>
  static T eval_node(const ExprNode& n, std::span<const T> x) {
    using std::cos;
    using std::exp;
    using std::sin;
    switch (n.kind) {
      case ExprKind::Number: return T(n.number);
      case ExprKind::Var: return x[static_cast<std::size_t>(n.var)];
      case ExprKind::Neg: return -eval_node<T>(*n.lhs, x);
      case ExprKind::Add: return eval_node<T>(*n.lhs, x) + eval_node<T>(*n.rhs, x);
      case ExprKind::Sub: return eval_node<T>(*n.lhs, x) - eval_node<T>(*n.rhs, x);
      case ExprKind::Mul: return eval_node<T>(*n.lhs, x) * eval_node<T>(*n.rhs, x);
      case ExprKind::Div: return eval_node<T>(*n.lhs, x) / eval_node<T>(*n.rhs, x);
      case ExprKind::Pow: return ipow(eval_node<T>(*n.lhs, x), n.exponent);
      case ExprKind::Sin: return sin(eval_node<T>(*n.lhs, x));
      case ExprKind::Cos: return cos(eval_node<T>(*n.lhs, x));
      case ExprKind::Exp: return exp(eval_node<T>(*n.lhs, x));
    }
    return T(0.0);
  }

  std::shared_ptr<const ExprNode> root_;
};

/// Parses `source` against the chart's coordinate labels.
Expr parse_expr(std::string_view source, const Chart& chart);

/// Fully parenthesized text that parses back to a structurally equal tree.
std::string to_string(const Expr& e);

/// Bundles expressions into a SmoothMap on the chart (one output per expr).
SmoothMap to_map(const std::vector<Expr>& exprs, std::size_t dim);

/// Parses each source and bundles the result.
SmoothMap parse_map(const std::vector<std::string>& sources, const Chart& chart);

}  // namespace nlg
