#pragma once

// Arithmetic expression trees for user-supplied norms.
//
// Grammar (whitespace-insensitive):
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := '-' factor | base ('^' ['-'] integer)?
//   base   := number | 'y' integer | '(' expr ')' | 'sqrt' '(' expr ')'
// so '^' binds tighter than unary minus, which binds tighter than '*' '/'.
// Variables are 1-based: y1 .. y<dim>.

#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "finsub/jets.hpp"

namespace finsub {

enum class ExprKind { Number, Variable, Add, Sub, Mul, Div, Neg, Pow, Sqrt };

struct ExprNode {
  ExprKind kind = ExprKind::Number;
  double number = 0.0;  // Number
  int variable = 0;     // Variable, 0-based
  int exponent = 0;     // Pow
  std::shared_ptr<const ExprNode> lhs;  // unary operand or left child
  std::shared_ptr<const ExprNode> rhs;
};

class ExprTree {
 public:
  ExprTree() = default;
  ExprTree(std::shared_ptr<const ExprNode> root, int dim)
      : root_(std::move(root)), dim_(dim) {}

  int dim() const noexcept { return dim_; }
  const ExprNode* root() const noexcept { return root_.get(); }

  /// Throws SingularDirection on a zero divisor or a negative sqrt argument.
  double evaluate(std::span<const double> y) const;
  /// Jet evaluation; propagates DivisionByZeroJet / NegativeSqrtJet.
  Jet4 evaluate(std::span<const Jet4> y) const;

  /// Parenthesized text that parses back to an equal tree.
  std::string to_string() const;

  friend bool operator==(const ExprTree& a, const ExprTree& b);

 private:
  std::shared_ptr<const ExprNode> root_;
  int dim_ = 0;
};

/// Throws SyntaxError (with byte position), UnknownVariable or ArityError.
ExprTree parse_norm(std::string_view text, int dim);

}  // namespace finsub
