#include "finsub/germ.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "finsub/errors.hpp"
#include "finsub/jets.hpp"

namespace finsub {

void Sym3::set(int i, int j, int k, double v) {
  raw(i, j, k) = raw(i, k, j) = raw(j, i, k) = v;
  raw(j, k, i) = raw(k, i, j) = raw(k, j, i) = v;
}

double Sym3::cubic(const Eigen::VectorXd& u) const {
  double s = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k) s += (*this)(i, j, k) * u[i] * u[j] * u[k];
  return s;
}

Eigen::MatrixXd Sym3::contract(const Eigen::VectorXd& u) const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k) m(i, j) += (*this)(i, j, k) * u[k];
  return m;
}

double Sym3::symmetrize() {
  double dev = 0.0;
  std::vector<double> out(data_.size());
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      for (int k = 0; k < n_; ++k) {
        const double vals[6] = {(*this)(i, j, k), (*this)(i, k, j), (*this)(j, i, k),
                                (*this)(j, k, i), (*this)(k, i, j), (*this)(k, j, i)};
        double mean = 0.0;
        for (double v : vals) mean += v;
        mean /= 6.0;
        dev = std::max(dev, std::abs(vals[0] - mean));
        out[(i * n_ + j) * n_ + k] = mean;
      }
    }
  }
  data_ = std::move(out);
  return dev;
}

Germ Germ::from_arrays(int n, int p, std::vector<Eigen::MatrixXd> d2,
                       std::vector<Sym3> d3) {
  if (n < 1 || p < 1) throw std::invalid_argument("germ: n and p must be positive");
  if (static_cast<int>(d2.size()) != p || static_cast<int>(d3.size()) != p)
    throw std::invalid_argument("germ: expected " + std::to_string(p) + " jet blocks");
  Germ g;
  g.n = n;
  g.p = p;
  for (auto& m : d2) {
    if (m.rows() != n || m.cols() != n)
      throw std::invalid_argument("germ: second jet block is not n x n");
    const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    g.input_asymmetry = std::max(g.input_asymmetry, (m - sym).cwiseAbs().maxCoeff());
    m = sym;
  }
  for (auto& t : d3) {
    if (t.n() != n) throw std::invalid_argument("germ: third jet block is not n x n x n");
    g.input_asymmetry = std::max(g.input_asymmetry, t.symmetrize());
  }
  g.d2 = std::move(d2);
  g.d3 = std::move(d3);
  return g;
}

Germ Germ::flat(int n, int p) {
  return from_arrays(n, p, std::vector<Eigen::MatrixXd>(p, Eigen::MatrixXd::Zero(n, n)),
                     std::vector<Sym3>(p, Sym3(n)));
}

Eigen::VectorXd Germ::kappa(const Eigen::VectorXd& u) const {
  Eigen::VectorXd k(p);
  for (int a = 0; a < p; ++a) k[a] = u.dot(d2[a] * u);
  return k;
}

Eigen::VectorXd Germ::cubic(const Eigen::VectorXd& u) const {
  Eigen::VectorXd c(p);
  for (int a = 0; a < p; ++a) c[a] = d3[a].cubic(u);
  return c;
}

Eigen::VectorXd Germ::graph(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y(p);
  for (int a = 0; a < p; ++a) y[a] = 0.5 * x.dot(d2[a] * x) + d3[a].cubic(x) / 6.0;
  return y;
}

bool operator==(const Germ& a, const Germ& b) {
  return a.n == b.n && a.p == b.p && a.d2 == b.d2 && a.d3 == b.d3;
}

AmbientFrame AmbientFrame::identity(int dim) {
  return {Eigen::VectorXd::Zero(dim), Eigen::MatrixXd::Identity(dim, dim)};
}

namespace {

void check_invertible(const Eigen::MatrixXd& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw NonInvertibleFrame(std::string(what) + " is not square");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (!(s[s.size() - 1] > 1e-12 * s[0]))
    throw NonInvertibleFrame(std::string(what) + " is singular");
}

}  // namespace

std::pair<Germ, AmbientFrame> adapt_germ(const Eigen::MatrixXd& raw_d1,
                                         const std::vector<Eigen::MatrixXd>& raw_d2,
                                         const std::vector<Sym3>& raw_d3,
                                         const AmbientFrame& frame) {
  const int p = static_cast<int>(raw_d2.size());
  if (p == 0) throw std::invalid_argument("adapt_germ: no second jet blocks");
  const int n = static_cast<int>(raw_d2.front().rows());
  if (raw_d1.rows() != p || raw_d1.cols() != n)
    throw std::invalid_argument("adapt_germ: gradient must be p x n");
  if (frame.basis.rows() != n + p || frame.origin.size() != n + p)
    throw std::invalid_argument("adapt_germ: frame dimension must be n + p");
  check_invertible(frame.basis, "ambient frame");

  Germ g = Germ::from_arrays(n, p, raw_d2, raw_d3);
  // Old coordinates (x, y) = T (x, y~) with T = [[I, 0], [d1, I]].
  Eigen::MatrixXd T = Eigen::MatrixXd::Identity(n + p, n + p);
  T.bottomLeftCorner(p, n) = raw_d1;
  AmbientFrame out{frame.origin, frame.basis * T};
  return {std::move(g), std::move(out)};
}

std::pair<Germ, AmbientFrame> adapt_germ(const RawGraph& raw, const AmbientFrame& frame) {
  return adapt_germ(raw.d1, raw.d2, raw.d3, frame);
}

std::pair<RawGraph, AmbientFrame> apply_linear_map(const Germ& germ,
                                                   const AmbientFrame& frame,
                                                   const Eigen::MatrixXd& L) {
  const int n = germ.n;
  const int p = germ.p;
  const int d = n + p;
  if (L.rows() != d || L.cols() != d)
    throw std::invalid_argument("apply_linear_map: L must be (n+p) x (n+p)");
  check_invertible(L, "linear map");
  const Eigen::MatrixXd L11 = L.topLeftCorner(n, n);
  check_invertible(L11, "tangent block of the linear map");
  const Eigen::MatrixXd L12 = L.topRightCorner(n, p);
  const Eigen::MatrixXd L21 = L.bottomLeftCorner(p, n);
  const Eigen::MatrixXd L22 = L.bottomRightCorner(p, p);
  const Eigen::MatrixXd L11inv = L11.inverse();

  // Jets in the new tangent coordinates x~, order 3.
  constexpr int order = 3;
  std::vector<Jet4> xt;
  for (int i = 0; i < n; ++i) xt.push_back(Jet4::variable(n, i, 0.0, order));

  auto graph = [&](const std::vector<Jet4>& x) {
    std::vector<Jet4> f(p, Jet4(n, 0.0, order));
    for (int a = 0; a < p; ++a) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const double q = germ.d2[a](i, j);
          Jet4 xx = x[i] * x[j];
          if (q != 0.0) f[a] += (0.5 * q) * xx;
          for (int k = 0; k < n; ++k) {
            const double c = germ.d3[a](i, j, k);
            if (c != 0.0) f[a] += (c / 6.0) * (xx * x[k]);
          }
        }
      }
    }
    return f;
  };
  auto linear = [&](const Eigen::MatrixXd& M, const std::vector<Jet4>& v) {
    std::vector<Jet4> out(M.rows(), Jet4(n, 0.0, order));
    for (int r = 0; r < M.rows(); ++r)
      for (int c = 0; c < M.cols(); ++c)
        if (M(r, c) != 0.0) out[r] += M(r, c) * v[c];
    return out;
  };

  // x = L11^{-1} (x~ - L12 f(x)); f is at least quadratic, so each pass fixes
  // one more degree.
  std::vector<Jet4> x = linear(L11inv, xt);
  for (int it = 0; it < order; ++it) {
    std::vector<Jet4> rhs = xt;
    const auto corr = linear(L12, graph(x));
    for (int i = 0; i < n; ++i) rhs[i] -= corr[i];
    x = linear(L11inv, rhs);
  }
  std::vector<Jet4> z = linear(L21, x);
  const auto zf = linear(L22, graph(x));
  for (int a = 0; a < p; ++a) z[a] += zf[a];

  RawGraph raw;
  raw.n = n;
  raw.p = p;
  raw.d1 = Eigen::MatrixXd(p, n);
  for (int a = 0; a < p; ++a) {
    Eigen::MatrixXd h(n, n);
    Sym3 t(n);
    for (int i = 0; i < n; ++i) {
      raw.d1(a, i) = jet_partial(z[a], {i});
      for (int j = 0; j < n; ++j) {
        h(i, j) = jet_partial(z[a], {i, j});
        for (int k = 0; k < n; ++k) t.raw(i, j, k) = jet_partial(z[a], {i, j, k});
      }
    }
    raw.d2.push_back(h);
    raw.d3.push_back(t);
  }
  AmbientFrame out{frame.origin, frame.basis * L.inverse()};
  return {std::move(raw), std::move(out)};
}

}  // namespace finsub
