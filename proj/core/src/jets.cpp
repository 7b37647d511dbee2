#include "finsub/jets.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "finsub/errors.hpp"

namespace finsub {
namespace detail {

struct JetLayout {
  struct Product {
    int a;
    int b;
    int r;
  };

  int dim = 0;
  std::vector<std::uint8_t> exps;  // size() * dim, row per monomial
  std::vector<int> degree;
  std::array<std::size_t, kMaxJetOrder + 1> degree_end{};
  std::unordered_map<std::uint64_t, int> index;
  std::vector<Product> products;  // sorted by degree of the result
  std::array<std::size_t, kMaxJetOrder + 1> product_end{};
  std::vector<int> raise;  // [i * dim + v] -> index of m + e_v, or -1
  std::vector<double> factorial;

  std::size_t size() const { return degree.size(); }
  const std::uint8_t* exp(int i) const { return exps.data() + i * dim; }

  std::uint64_t key(const std::uint8_t* e) const {
    std::uint64_t k = 0;
    for (int v = dim - 1; v >= 0; --v) k = k * 5 + e[v];
    return k;
  }

  int find(std::span<const int> m) const {
    if (static_cast<int>(m.size()) != dim) {
      throw std::invalid_argument("multi-index length " +
                                  std::to_string(m.size()) +
                                  " does not match jet dimension " +
                                  std::to_string(dim));
    }
    std::uint64_t k = 0;
    int total = 0;
    for (int v = dim - 1; v >= 0; --v) {
      if (m[v] < 0) throw std::invalid_argument("negative multi-index entry");
      total += m[v];
      if (total > kMaxJetOrder) return -1;
      k = k * 5 + static_cast<std::uint64_t>(m[v]);
    }
    auto it = index.find(k);
    return it == index.end() ? -1 : it->second;
  }

  explicit JetLayout(int d) : dim(d) {
    std::vector<std::uint8_t> cur(d, 0);
    // Graded enumeration: all monomials of degree q, lexicographically
    // descending in the leading variable.
    for (int q = 0; q <= kMaxJetOrder; ++q) {
      enumerate(q, 0, cur);
      degree_end[q] = degree.size();
    }
    for (std::size_t i = 0; i < size(); ++i)
      index.emplace(key(exp(static_cast<int>(i))), static_cast<int>(i));

    raise.assign(size() * d, -1);
    std::vector<std::uint8_t> tmp(d);
    for (std::size_t i = 0; i < size(); ++i) {
      if (degree[i] == kMaxJetOrder) continue;
      for (int v = 0; v < d; ++v) {
        std::copy_n(exp(static_cast<int>(i)), d, tmp.begin());
        ++tmp[v];
        raise[i * d + v] = index.at(key(tmp.data()));
      }
    }

    factorial.resize(size());
    for (std::size_t i = 0; i < size(); ++i) {
      double f = 1.0;
      for (int v = 0; v < d; ++v)
        for (int t = 2; t <= exp(static_cast<int>(i))[v]; ++t) f *= t;
      factorial[i] = f;
    }

    for (int q = 0; q <= kMaxJetOrder; ++q) {
      for (std::size_t a = 0; a < degree_end[q]; ++a) {
        const int da = degree[a];
        for (std::size_t b = 0; b < degree_end[q - da]; ++b) {
          if (da + degree[b] != q) continue;
          for (int v = 0; v < d; ++v)
            tmp[v] = exp(static_cast<int>(a))[v] + exp(static_cast<int>(b))[v];
          products.push_back({static_cast<int>(a), static_cast<int>(b),
                              index.at(key(tmp.data()))});
        }
      }
      product_end[q] = products.size();
    }
  }

 private:
  void enumerate(int remaining, int var, std::vector<std::uint8_t>& cur) {
    if (var == dim - 1) {
      cur[var] = static_cast<std::uint8_t>(remaining);
      exps.insert(exps.end(), cur.begin(), cur.end());
      int q = 0;
      for (auto e : cur) q += e;
      degree.push_back(q);
      cur[var] = 0;
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      cur[var] = static_cast<std::uint8_t>(e);
      enumerate(remaining - e, var + 1, cur);
    }
    cur[var] = 0;
  }
};

std::shared_ptr<const JetLayout> layout_for(int dim) {
  if (dim < 1 || dim > 27) {
    throw std::invalid_argument("jet dimension must be in [1, 27], got " +
                                std::to_string(dim));
  }
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const JetLayout>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[dim];
  if (!slot) slot = std::make_shared<const JetLayout>(dim);
  return slot;
}

}  // namespace detail

namespace {

void check_order(int order) {
  if (order < 0 || order > kMaxJetOrder) {
    throw std::invalid_argument("jet order must be in [0, 4], got " +
                                std::to_string(order));
  }
}

}  // namespace

Jet4::Jet4() : Jet4(1, 0.0) {}

Jet4::Jet4(std::shared_ptr<const detail::JetLayout> layout, int order)
    : layout_(std::move(layout)), order_(order) {
  c_.assign(layout_->degree_end[order], 0.0);
}

Jet4::Jet4(int dim, double value, int order)
    : Jet4(detail::layout_for(dim), (check_order(order), order)) {
  c_[0] = value;
}

Jet4 Jet4::variable(int dim, int index, double value, int order) {
  if (index < 0 || index >= dim)
    throw std::out_of_range("jet variable index out of range");
  Jet4 j(dim, value, order);
  if (order >= 1) j.c_[1 + index] = 1.0;
  return j;
}

int Jet4::dim() const noexcept { return layout_->dim; }

double Jet4::coeff(std::span<const int> m) const {
  const int i = layout_->find(m);
  if (i < 0 || static_cast<std::size_t>(i) >= c_.size()) return 0.0;
  return c_[i];
}

void Jet4::set_coeff(std::span<const int> m, double v) {
  const int i = layout_->find(m);
  if (i < 0 || static_cast<std::size_t>(i) >= c_.size())
    throw OrderExceeded("multi-index degree exceeds jet order");
  c_[i] = v;
}

double Jet4::derivative(std::span<const int> m) const {
  int total = 0;
  for (int e : m) total += e;
  if (total > order_) {
    throw OrderExceeded("derivative of order " + std::to_string(total) +
                        " requested from a jet of order " +
                        std::to_string(order_));
  }
  const int i = layout_->find(m);
  return c_[i] * layout_->factorial[i];
}

Jet4 Jet4::partial(int var) const {
  if (var < 0 || var >= dim()) throw std::out_of_range("partial: bad variable");
  if (order_ == 0) throw OrderExceeded("cannot differentiate an order-0 jet");
  Jet4 r(layout_, order_ - 1);
  const auto& L = *layout_;
  for (std::size_t i = 0; i < r.c_.size(); ++i) {
    const int up = L.raise[i * L.dim + var];
    r.c_[i] = (L.exp(static_cast<int>(i))[var] + 1) * c_[up];
  }
  return r;
}

Jet4 Jet4::restrict_leading(int k) const {
  if (k < 1 || k > dim()) throw std::out_of_range("restrict_leading: bad k");
  if (k == dim()) return *this;
  Jet4 r(detail::layout_for(k), order_);
  const auto& R = *r.layout_;
  // Keys are base-5 digits with the leading variable least significant, so a
  // monomial padded with trailing zeros keeps its key.
  for (std::size_t i = 0; i < r.c_.size(); ++i)
    r.c_[i] = c_[layout_->index.at(R.key(R.exp(static_cast<int>(i))))];
  return r;
}

Jet4 Jet4::truncate(int order) const {
  check_order(order);
  if (order >= order_) return *this;
  Jet4 r(layout_, order);
  std::copy_n(c_.begin(), r.c_.size(), r.c_.begin());
  return r;
}

std::vector<MultiIndex> Jet4::multi_indices() const {
  std::vector<MultiIndex> out;
  out.reserve(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) {
    const auto* e = layout_->exp(static_cast<int>(i));
    out.emplace_back(e, e + dim());
  }
  return out;
}

void Jet4::check_compatible(const Jet4& o) const {
  if (o.dim() != dim()) {
    throw std::invalid_argument("jet dimension mismatch: " +
                                std::to_string(dim()) + " vs " +
                                std::to_string(o.dim()));
  }
}

Jet4& Jet4::operator+=(const Jet4& o) {
  check_compatible(o);
  if (o.order_ < order_) *this = truncate(o.order_);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Jet4& Jet4::operator-=(const Jet4& o) {
  check_compatible(o);
  if (o.order_ < order_) *this = truncate(o.order_);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Jet4& Jet4::operator*=(const Jet4& o) { return *this = *this * o; }
Jet4& Jet4::operator/=(const Jet4& o) { return *this = *this / o; }

Jet4& Jet4::operator+=(double s) {
  c_[0] += s;
  return *this;
}
Jet4& Jet4::operator-=(double s) {
  c_[0] -= s;
  return *this;
}
Jet4& Jet4::operator*=(double s) {
  for (auto& v : c_) v *= s;
  return *this;
}
Jet4& Jet4::operator/=(double s) {
  if (s == 0.0) throw DivisionByZeroJet("division of a jet by zero");
  for (auto& v : c_) v /= s;
  return *this;
}

Jet4 Jet4::operator-() const {
  Jet4 r = *this;
  for (auto& v : r.c_) v = -v;
  return r;
}

Jet4 operator*(const Jet4& a, const Jet4& b) {
  a.check_compatible(b);
  const int q = std::min(a.order_, b.order_);
  Jet4 r(a.layout_, q);
  const auto& P = a.layout_->products;
  const std::size_t end = a.layout_->product_end[q];
  const double* ac = a.c_.data();
  const double* bc = b.c_.data();
  double* rc = r.c_.data();
  for (std::size_t t = 0; t < end; ++t) rc[P[t].r] += ac[P[t].a] * bc[P[t].b];
  return r;
}

Jet4 Jet4::compose(const std::array<double, kMaxJetOrder + 1>& series) const {
  Jet4 delta = *this;
  delta.c_[0] = 0.0;
  Jet4 r(layout_, order_);
  r.c_[0] = series[order_];
  for (int k = order_ - 1; k >= 0; --k) {
    r = r * delta;
    r.c_[0] += series[k];
  }
  return r;
}

Jet4 reciprocal(const Jet4& a) {
  const double a0 = a.value();
  if (a0 == 0.0 || !std::isfinite(a0))
    throw DivisionByZeroJet("jet divisor has zero constant term");
  std::array<double, kMaxJetOrder + 1> s{};
  double p = 1.0 / a0;
  for (int k = 0; k <= kMaxJetOrder; ++k) {
    s[k] = p;
    p *= -1.0 / a0;
  }
  return a.compose(s);
}

Jet4 operator/(const Jet4& a, const Jet4& b) { return a * reciprocal(b); }

Jet4 operator/(double s, const Jet4& a) { return reciprocal(a) *= s; }

Jet4 sqrt(const Jet4& a) {
  const double a0 = a.value();
  if (!(a0 > 0.0))
    throw NegativeSqrtJet("sqrt of a jet with non-positive constant term");
  // binom(1/2, k) * a0^(1/2 - k)
  std::array<double, kMaxJetOrder + 1> s{};
  double binom = 1.0;
  double p = std::sqrt(a0);
  for (int k = 0; k <= kMaxJetOrder; ++k) {
    s[k] = binom * p;
    binom *= (0.5 - k) / (k + 1);
    p /= a0;
  }
  return a.compose(s);
}

Jet4 pow(const Jet4& a, int k) {
  if (k < 0) return reciprocal(pow(a, -k));
  Jet4 result(a.dim(), 1.0, a.order());
  Jet4 base = a;
  while (k > 0) {
    if (k & 1) result *= base;
    k >>= 1;
    if (k) base *= base;
  }
  return result;
}

bool operator==(const Jet4& a, const Jet4& b) {
  return a.dim() == b.dim() && a.order_ == b.order_ && a.c_ == b.c_;
}

Jet4 jet_arith(const Jet4& a, const Jet4& b, JetOp op) {
  switch (op) {
    case JetOp::Add:
      return a + b;
    case JetOp::Mul:
      return a * b;
    case JetOp::Div:
      return a / b;
    case JetOp::Sqrt:
      return sqrt(a);
    case JetOp::Pow: {
      const double e = b.value();
      const auto coeffs = b.coefficients();
      const bool constant = std::all_of(coeffs.begin() + 1, coeffs.end(),
                                        [](double c) { return c == 0.0; });
      if (!constant || e != std::round(e) || std::abs(e) > 64)
        throw std::invalid_argument("pow exponent must be a constant integer");
      return pow(a, static_cast<int>(e));
    }
  }
  throw std::invalid_argument("unknown jet operation");
}

double jet_partial(const Jet4& j, std::span<const int> vars) {
  MultiIndex m(j.dim(), 0);
  for (int v : vars) {
    if (v < 0 || v >= j.dim()) throw std::out_of_range("jet_partial: bad variable");
    ++m[v];
  }
  return j.derivative(m);
}

std::size_t jet_size(int dim, int order) {
  check_order(order);
  return detail::layout_for(dim)->degree_end[order];
}

}  // namespace finsub
