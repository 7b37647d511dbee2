#include "finsub/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "finsub/errors.hpp"

namespace finsub {
namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make_number(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::Number;
  n->number = v;
  return n;
}

NodePtr make_variable(int index) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::Variable;
  n->variable = index;
  return n;
}

NodePtr make_unary(ExprKind kind, NodePtr operand, int exponent = 0) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->lhs = std::move(operand);
  n->exponent = exponent;
  return n;
}

NodePtr make_binary(ExprKind kind, NodePtr a, NodePtr b) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

class Parser {
 public:
  Parser(std::string_view text, int dim) : text_(text), dim_(dim) {}

  NodePtr parse() {
    skip_space();
    if (at_end()) throw SyntaxError("empty expression", pos_);
    NodePtr root = expr();
    skip_space();
    if (!at_end())
      throw SyntaxError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return root;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool peek(char c) {
    skip_space();
    return !at_end() && text_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c)) {
      const std::string got =
          at_end() ? "end of input" : std::string("'") + text_[pos_] + "'";
      throw SyntaxError(std::string("expected '") + c + "', got " + got, pos_);
    }
    ++pos_;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (true) {
      if (peek('+')) {
        ++pos_;
        lhs = make_binary(ExprKind::Add, lhs, term());
      } else if (peek('-')) {
        ++pos_;
        lhs = make_binary(ExprKind::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    while (true) {
      if (peek('*')) {
        ++pos_;
        lhs = make_binary(ExprKind::Mul, lhs, factor());
      } else if (peek('/')) {
        ++pos_;
        lhs = make_binary(ExprKind::Div, lhs, factor());
      } else {
        return lhs;
      }
    }
  }

  NodePtr factor() {
    if (peek('-')) {
      ++pos_;
      return make_unary(ExprKind::Neg, factor());
    }
    NodePtr b = base();
    if (peek('^')) {
      ++pos_;
      skip_space();
      bool negative = false;
      if (!at_end() && text_[pos_] == '-') {
        negative = true;
        ++pos_;
      }
      const std::size_t start = pos_;
      const long k = integer("integer exponent");
      if (k > 64) throw SyntaxError("exponent too large", start);
      b = make_unary(ExprKind::Pow, b, static_cast<int>(negative ? -k : k));
    }
    return b;
  }

  long integer(const char* what) {
    const std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (pos_ == start) throw SyntaxError(std::string("expected ") + what, start);
    long v = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
    if (ec != std::errc()) throw SyntaxError("integer out of range", start);
    return v;
  }

  NodePtr base() {
    skip_space();
    if (at_end()) throw SyntaxError("unexpected end of input", pos_);
    const char c = text_[pos_];
    const std::size_t start = pos_;
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = pos_;
      while (end < text_.size() && std::isalpha(static_cast<unsigned char>(text_[end])))
        ++end;
      const std::string_view word = text_.substr(pos_, end - pos_);
      if (word == "y") {
        pos_ = end;
        const long idx = integer("variable index after 'y'");
        if (idx < 1 || idx > dim_) {
          throw UnknownVariable("unknown variable y" + std::to_string(idx) +
                                " (dimension " + std::to_string(dim_) +
                                ") at position " + std::to_string(start));
        }
        return make_variable(static_cast<int>(idx - 1));
      }
      if (word == "sqrt") {
        pos_ = end;
        expect('(');
        if (peek(')')) {
          throw ArityError("sqrt expects 1 argument, got 0 at position " +
                           std::to_string(pos_));
        }
        NodePtr arg = expr();
        if (peek(',')) {
          throw ArityError("sqrt expects 1 argument, got more at position " +
                           std::to_string(pos_));
        }
        expect(')');
        return make_unary(ExprKind::Sqrt, arg);
      }
      throw SyntaxError("unknown identifier '" + std::string(word) + "'", start);
    }
    throw SyntaxError(std::string("unexpected '") + c + "'", start);
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
    };
    digits();
    if (!at_end() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (!at_end() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      const std::size_t save = pos_;
      ++pos_;
      if (!at_end() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      const std::size_t exp_start = pos_;
      digits();
      if (pos_ == exp_start) pos_ = save;  // 'e' was not an exponent
    }
    const std::string lit(text_.substr(start, pos_ - start));
    if (lit == ".") throw SyntaxError("malformed number", start);
    char* end = nullptr;
    const double v = std::strtod(lit.c_str(), &end);
    if (end != lit.c_str() + lit.size()) throw SyntaxError("malformed number", start);
    return make_number(v);
  }

  std::string_view text_;
  int dim_;
  std::size_t pos_ = 0;
};

double eval_node(const ExprNode& n, std::span<const double> y) {
  switch (n.kind) {
    case ExprKind::Number:
      return n.number;
    case ExprKind::Variable:
      return y[n.variable];
    case ExprKind::Add:
      return eval_node(*n.lhs, y) + eval_node(*n.rhs, y);
    case ExprKind::Sub:
      return eval_node(*n.lhs, y) - eval_node(*n.rhs, y);
    case ExprKind::Mul:
      return eval_node(*n.lhs, y) * eval_node(*n.rhs, y);
    case ExprKind::Div: {
      const double d = eval_node(*n.rhs, y);
      if (d == 0.0) throw SingularDirection("expression divides by zero");
      return eval_node(*n.lhs, y) / d;
    }
    case ExprKind::Neg:
      return -eval_node(*n.lhs, y);
    case ExprKind::Pow: {
      const double b = eval_node(*n.lhs, y);
      if (n.exponent < 0 && b == 0.0)
        throw SingularDirection("expression raises zero to a negative power");
      return std::pow(b, n.exponent);
    }
    case ExprKind::Sqrt: {
      const double a = eval_node(*n.lhs, y);
      if (a < 0.0) throw SingularDirection("expression takes sqrt of a negative value");
      return std::sqrt(a);
    }
  }
  throw std::logic_error("bad expression node");
}

Jet4 eval_node(const ExprNode& n, std::span<const Jet4> y) {
  const int dim = y.front().dim();
  const int order = y.front().order();
  switch (n.kind) {
    case ExprKind::Number:
      return Jet4(dim, n.number, order);
    case ExprKind::Variable:
      return y[n.variable];
    case ExprKind::Add:
      return eval_node(*n.lhs, y) + eval_node(*n.rhs, y);
    case ExprKind::Sub:
      return eval_node(*n.lhs, y) - eval_node(*n.rhs, y);
    case ExprKind::Mul:
      return eval_node(*n.lhs, y) * eval_node(*n.rhs, y);
    case ExprKind::Div:
      return eval_node(*n.lhs, y) / eval_node(*n.rhs, y);
    case ExprKind::Neg:
      return -eval_node(*n.lhs, y);
    case ExprKind::Pow:
      return pow(eval_node(*n.lhs, y), n.exponent);
    case ExprKind::Sqrt:
      return sqrt(eval_node(*n.lhs, y));
  }
  throw std::logic_error("bad expression node");
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string print_node(const ExprNode& n) {
  switch (n.kind) {
    case ExprKind::Number:
      return format_number(n.number);
    case ExprKind::Variable:
      return "y" + std::to_string(n.variable + 1);
    case ExprKind::Add:
      return "(" + print_node(*n.lhs) + " + " + print_node(*n.rhs) + ")";
    case ExprKind::Sub:
      return "(" + print_node(*n.lhs) + " - " + print_node(*n.rhs) + ")";
    case ExprKind::Mul:
      return "(" + print_node(*n.lhs) + " * " + print_node(*n.rhs) + ")";
    case ExprKind::Div:
      return "(" + print_node(*n.lhs) + " / " + print_node(*n.rhs) + ")";
    case ExprKind::Neg:
      return "(-" + print_node(*n.lhs) + ")";
    case ExprKind::Pow:
      return "(" + print_node(*n.lhs) + ")^" + std::to_string(n.exponent);
    case ExprKind::Sqrt:
      return "sqrt(" + print_node(*n.lhs) + ")";
  }
  throw std::logic_error("bad expression node");
}

bool equal_nodes(const ExprNode* a, const ExprNode* b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case ExprKind::Number:
      return a->number == b->number;
    case ExprKind::Variable:
      return a->variable == b->variable;
    case ExprKind::Pow:
      return a->exponent == b->exponent && equal_nodes(a->lhs.get(), b->lhs.get());
    case ExprKind::Neg:
    case ExprKind::Sqrt:
      return equal_nodes(a->lhs.get(), b->lhs.get());
    default:
      return equal_nodes(a->lhs.get(), b->lhs.get()) &&
             equal_nodes(a->rhs.get(), b->rhs.get());
  }
}

}  // namespace

double ExprTree::evaluate(std::span<const double> y) const {
  if (!root_) throw std::logic_error("evaluating an empty expression");
  if (static_cast<int>(y.size()) != dim_)
    throw std::invalid_argument("expression evaluated at a point of wrong dimension");
  return eval_node(*root_, y);
}

Jet4 ExprTree::evaluate(std::span<const Jet4> y) const {
  if (!root_) throw std::logic_error("evaluating an empty expression");
  if (static_cast<int>(y.size()) != dim_)
    throw std::invalid_argument("expression evaluated at a point of wrong dimension");
  return eval_node(*root_, y);
}

std::string ExprTree::to_string() const {
  return root_ ? print_node(*root_) : std::string();
}

bool operator==(const ExprTree& a, const ExprTree& b) {
  return a.dim_ == b.dim_ && equal_nodes(a.root_.get(), b.root_.get());
}

ExprTree parse_norm(std::string_view text, int dim) {
  if (dim < 1) throw std::invalid_argument("expression dimension must be positive");
  return ExprTree(Parser(text, dim).parse(), dim);
}

}  // namespace finsub
