#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "finsub/errors.hpp"
#include "finsub/expr.hpp"
#include "finsub/minkowski.hpp"

using finsub::parse_norm;

TEST(Expr, SumOfSquares) {
  const auto t = parse_norm("y1^2 + y2^2", 2);
  const std::array<double, 2> y{3.0, 4.0};
  EXPECT_DOUBLE_EQ(t.evaluate(y), 25.0);
  EXPECT_EQ(t.root()->kind, finsub::ExprKind::Add);
}

TEST(Expr, DoublePlusIsSyntaxError) {
  try {
    parse_norm("y1^2 + + y2", 2);
    FAIL() << "expected SyntaxError";
  } catch (const finsub::SyntaxError& e) {
    EXPECT_EQ(e.position(), 7u);
  }
}

TEST(Expr, ErrorKinds) {
  EXPECT_THROW(parse_norm("y3", 2), finsub::UnknownVariable);
  EXPECT_THROW(parse_norm("y0", 2), finsub::UnknownVariable);
  EXPECT_THROW(parse_norm("sqrt()", 1), finsub::ArityError);
  EXPECT_THROW(parse_norm("sqrt(y1, y1)", 1), finsub::ArityError);
  EXPECT_THROW(parse_norm("(y1", 1), finsub::SyntaxError);
  EXPECT_THROW(parse_norm("", 1), finsub::SyntaxError);
  EXPECT_THROW(parse_norm("y1 y1", 1), finsub::SyntaxError);
  EXPECT_THROW(parse_norm("cos(y1)", 1), finsub::SyntaxError);
}

TEST(Expr, Precedence) {
  const std::array<double, 1> y{2.0};
  EXPECT_DOUBLE_EQ(parse_norm("-y1^2", 1).evaluate(y), -4.0);
  EXPECT_DOUBLE_EQ(parse_norm("2*y1^-1", 1).evaluate(y), 1.0);
  EXPECT_DOUBLE_EQ(parse_norm("1 - y1 - 1", 1).evaluate(y), -2.0);
  EXPECT_DOUBLE_EQ(parse_norm("8 / y1 / 2", 1).evaluate(y), 2.0);
  EXPECT_DOUBLE_EQ(parse_norm("sqrt(y1*8) + 1.5e1", 1).evaluate(y), 19.0);
}

TEST(Expr, ExampleTextAtUnitPoint) {
  const std::string text = finsub::example4_expression(10.0, 10.0, 0.01, 0.01);
  const auto t = parse_norm(text, 3);
  const std::array<double, 3> y{1.0, 0.0, 1.0};
  EXPECT_NEAR(t.evaluate(y), 20.01, 1e-12);
}

TEST(Expr, RoundTrip) {
  for (const char* text : {"y1^2 + y2^2", "-(y1 - y2)^3 / (1 + y1^2)", "sqrt(y1^2 + 2*y2^2) * 0.25"}) {
    const auto t = parse_norm(text, 2);
    EXPECT_EQ(parse_norm(t.to_string(), 2), t) << text;
  }
}

TEST(Expr, SingularEvaluation) {
  const std::array<double, 1> y{0.0};
  EXPECT_THROW(parse_norm("1 / y1", 1).evaluate(y), finsub::SingularDirection);
  const std::array<double, 1> m{-1.0};
  EXPECT_THROW(parse_norm("sqrt(y1)", 1).evaluate(m), finsub::SingularDirection);
}

TEST(Expr, JetEvaluationMatchesPointwise) {
  const auto t = parse_norm("(y1^2 + y2^2 + 0.5*y1*y2) / sqrt(1 + y2^2)", 2);
  const std::array<finsub::Jet4, 2> y{finsub::Jet4::variable(2, 0, 0.4),
                                      finsub::Jet4::variable(2, 1, -0.3)};
  const auto j = t.evaluate(y);
  const std::array<double, 2> p{0.4, -0.3};
  EXPECT_NEAR(j.value(), t.evaluate(p), 1e-15);
  const double h = 1e-5;
  const std::array<double, 2> pp{0.4 + h, -0.3}, pm{0.4 - h, -0.3};
  EXPECT_NEAR(j.derivative({1, 0}), (t.evaluate(pp) - t.evaluate(pm)) / (2 * h), 1e-8);
}
