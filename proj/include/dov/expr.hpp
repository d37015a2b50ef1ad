#pragma once

#include "dov/common.hpp"

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

namespace dov {

/// Parse failure carrying the byte offset into the source text.
class ExprError : public ValidationError {
 public:
  ExprError(const std::string& msg, std::size_t offset)
      : ValidationError(msg + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Scalar function of one variable `t`.
///
/// Grammar:
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := '-' factor | base ('^' factor)?
///   base   := number | 't' | 'pi' | 'e' | func '(' args ')' | '(' expr ')'
///   func   := log | exp | sqrt | pow (two arguments)
/// '^' is right associative and binds tighter than unary minus.
class ScalarExpr {
 public:
  enum class Op { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Log, Exp, Sqrt };

  static ScalarExpr parse(std::string_view source);
  static ScalarExpr constant(double value);
  static ScalarExpr variable();

  double operator()(double t) const;

  /// d/dt, by structural differentiation with light constant folding.
  ScalarExpr derivative() const;

  /// Fully parenthesised text that parses back to the same tree.
  std::string str() const;

  const std::string& source() const { return source_; }

  friend bool operator==(const ScalarExpr& a, const ScalarExpr& b);

  struct Node;

 private:
  explicit ScalarExpr(std::shared_ptr<const Node> root, std::string source);
  std::shared_ptr<const Node> root_;
  std::string source_;
};

}  // namespace dov
