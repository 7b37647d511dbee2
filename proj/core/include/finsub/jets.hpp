#pragma once

// Truncated multivariate Taylor jets of total order <= 4.
//
// A Jet4 stores the Taylor coefficients c_m = (d^|m| f / dy^m)(y0) / m! of a
// scalar function around an expansion point, for every multi-index m with
// |m| <= order(). Arithmetic is exact truncation of the Cauchy product, so a
// composite expression evaluated on variable jets yields the exact Taylor
// coefficients of the composite function up to order().
//
// order() is the number of degrees that are known to be correct. Freshly
// built jets carry order 4; differentiating loses one degree, and binary
// operations keep the smaller order of the two operands.

#include <array>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <vector>

namespace finsub {

inline constexpr int kMaxJetOrder = 4;

using MultiIndex = std::vector<int>;

namespace detail {
struct JetLayout;
}

class Jet4 {
 public:
  /// Constant zero in one variable.
  Jet4();
  /// Constant jet.
  Jet4(int dim, double value, int order = kMaxJetOrder);

  /// The coordinate function y_index expanded around `value`.
  static Jet4 variable(int dim, int index, double value,
                       int order = kMaxJetOrder);

  int dim() const noexcept;
  int order() const noexcept { return order_; }
  std::size_t size() const noexcept { return c_.size(); }

  double value() const noexcept { return c_[0]; }

  /// Taylor coefficient for `m`; zero for degrees above order().
  double coeff(std::span<const int> m) const;
  void set_coeff(std::span<const int> m, double v);

  /// m! * coeff(m): the partial derivative at the expansion point.
  /// Throws OrderExceeded when |m| > order().
  double derivative(std::span<const int> m) const;
  double derivative(std::initializer_list<int> m) const {
    return derivative(std::span<const int>(m.begin(), m.size()));
  }

  /// d/dy_var, valid to order() - 1.
  Jet4 partial(int var) const;
  /// Restriction to the first k variables (remaining displacements set to 0).
  Jet4 restrict_leading(int k) const;
  /// Drop all degrees above `order`.
  Jet4 truncate(int order) const;

  /// Multi-indices in storage order (graded, then lexicographic).
  std::vector<MultiIndex> multi_indices() const;
  std::span<const double> coefficients() const noexcept { return c_; }

  Jet4& operator+=(const Jet4& o);
  Jet4& operator-=(const Jet4& o);
  Jet4& operator*=(const Jet4& o);
  Jet4& operator/=(const Jet4& o);
  Jet4& operator+=(double s);
  Jet4& operator-=(double s);
  Jet4& operator*=(double s);
  Jet4& operator/=(double s);

  Jet4 operator-() const;

  friend Jet4 operator+(Jet4 a, const Jet4& b) { return a += b; }
  friend Jet4 operator-(Jet4 a, const Jet4& b) { return a -= b; }
  friend Jet4 operator*(const Jet4& a, const Jet4& b);
  friend Jet4 operator/(const Jet4& a, const Jet4& b);
  friend Jet4 operator+(Jet4 a, double s) { return a += s; }
  friend Jet4 operator+(double s, Jet4 a) { return a += s; }
  friend Jet4 operator-(Jet4 a, double s) { return a -= s; }
  friend Jet4 operator-(double s, const Jet4& a) { return (-a) += s; }
  friend Jet4 operator*(Jet4 a, double s) { return a *= s; }
  friend Jet4 operator*(double s, Jet4 a) { return a *= s; }
  friend Jet4 operator/(Jet4 a, double s) { return a /= s; }
  friend Jet4 operator/(double s, const Jet4& a);

  friend bool operator==(const Jet4& a, const Jet4& b);

  /// 1 / a. Throws DivisionByZeroJet on a zero constant term.
  friend Jet4 reciprocal(const Jet4& a);
  /// Throws NegativeSqrtJet unless the constant term is positive.
  friend Jet4 sqrt(const Jet4& a);
  /// Integer power; negative exponents go through reciprocal().
  friend Jet4 pow(const Jet4& a, int k);

  /// f(a) from the Taylor coefficients f_k = f^(k)(a0)/k!, k = 0..order.
  Jet4 compose(const std::array<double, kMaxJetOrder + 1>& series) const;

 private:
  Jet4(std::shared_ptr<const detail::JetLayout> layout, int order);
  void check_compatible(const Jet4& o) const;

  std::shared_ptr<const detail::JetLayout> layout_;
  int order_ = kMaxJetOrder;
  std::vector<double> c_;
};

enum class JetOp { Add, Mul, Div, Sqrt, Pow };

/// Dispatch form of the jet arithmetic. For Sqrt `b` is ignored; for Pow the
/// exponent is b's constant term, which must be integral with no higher
/// coefficients.
Jet4 jet_arith(const Jet4& a, const Jet4& b, JetOp op);

/// Partial derivative at the expansion point, differentiating once per entry
/// of `vars` (variable indices, repeats allowed).
double jet_partial(const Jet4& j, std::span<const int> vars);
inline double jet_partial(const Jet4& j, std::initializer_list<int> vars) {
  return jet_partial(j, std::span<const int>(vars.begin(), vars.size()));
}

/// Number of monomials of total degree <= order in `dim` variables.
std::size_t jet_size(int dim, int order);

}  // namespace finsub
