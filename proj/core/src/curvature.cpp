#include "finsub/curvature.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "finsub/errors.hpp"

namespace finsub {
namespace {

using JetMat = std::vector<Jet4>;  // row-major

constexpr double kMaxCondition = 1e12;

void check_inputs(const NormModel& norm, const Germ& germ, const Eigen::VectorXd& u) {
  if (norm.dim() != germ.n + germ.p) {
    throw std::invalid_argument("norm dimension " + std::to_string(norm.dim()) +
                                " does not match n + p = " +
                                std::to_string(germ.n + germ.p));
  }
  if (u.size() != germ.n) throw std::invalid_argument("direction must have n entries");
  if (!(u.norm() > 0.0)) throw SingularDirection("direction u must be nonzero");
}

Eigen::VectorXd lift(const Germ& germ, const Eigen::VectorXd& u) {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(germ.n + germ.p);
  y.head(germ.n) = u;
  return y;
}

// Inverse of a fundamental tensor; refuses indefinite or badly conditioned input.
Eigen::MatrixXd checked_inverse(const Eigen::MatrixXd& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double lo = ev[0];
  const double hi = ev[ev.size() - 1];
  if (!(lo > 0.0) || hi > kMaxCondition * lo) {
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "fundamental tensor is not positive definite (eigenvalues %.3g .. %.3g)",
                  lo, hi);
    throw NonPDTensor(buf);
  }
  return es.eigenvectors() * ev.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
}

JetMat jet_matmul(const JetMat& a, const JetMat& b, int n) {
  JetMat out;
  out.reserve(n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Jet4 s = a[i * n] * b[j];
      for (int k = 1; k < n; ++k) s += a[i * n + k] * b[k * n + j];
      out.push_back(std::move(s));
    }
  }
  return out;
}

// g^{-1} = sum_k (-g0^{-1} dg)^k g0^{-1}, exact up to the jets' order.
JetMat jet_inverse(const JetMat& g, int n) {
  const int dim = g.front().dim();
  int order = kMaxJetOrder;
  Eigen::MatrixXd g0(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      g0(i, j) = g[i * n + j].value();
      order = std::min(order, g[i * n + j].order());
    }
  }
  const Eigen::MatrixXd inv0 = checked_inverse(0.5 * (g0 + g0.transpose()));
  JetMat X(n * n, Jet4(dim, 0.0, order));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) X[i * n + j] -= inv0(i, k) * (g[k * n + j] - g0(k, j));
  JetMat term;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) term.emplace_back(dim, inv0(i, j), order);
  JetMat result = term;
  for (int k = 1; k <= order; ++k) {
    term = jet_matmul(X, term, n);
    for (int i = 0; i < n * n; ++i) result[i] += term[i];
  }
  return result;
}

Eigen::MatrixXd hessian(const Jet4& j) {
  const int d = j.dim();
  Eigen::MatrixXd h(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b <= a; ++b) h(a, b) = h(b, a) = jet_partial(j, {a, b});
  return h;
}

Jet4 evaluate_on_jets(const NormModel& norm, const std::vector<Jet4>& y) {
  try {
    return norm.evaluate(y);
  } catch (const DivisionByZeroJet& e) {
    throw SingularDirection(std::string("norm is singular along the germ: ") + e.what());
  } catch (const NegativeSqrtJet& e) {
    throw SingularDirection(std::string("norm is singular along the germ: ") + e.what());
  }
}

// ---- Jet oracle: differentiate the definition of the spray. ----

double oracle_jet(const NormModel& norm, const Germ& germ, const Eigen::VectorXd& u) {
  const int n = germ.n;
  const int p = germ.p;
  const int D = 2 * n;  // u_0..u_{n-1}, then x_0..x_{n-1}
  std::vector<Jet4> uj;
  std::vector<Jet4> xj;
  for (int i = 0; i < n; ++i) {
    uj.push_back(Jet4::variable(D, i, u[i]));
    xj.push_back(Jet4::variable(D, n + i, 0.0));
  }
  std::vector<Jet4> Y(uj);
  for (int a = 0; a < p; ++a) {
    Jet4 ya(D, 0.0);
    for (int i = 0; i < n; ++i) {
      // f^a_i(x) for the cubic Taylor polynomial of the germ
      Jet4 fi(D, 0.0);
      for (int j = 0; j < n; ++j) {
        if (germ.d2[a](i, j) != 0.0) fi += germ.d2[a](i, j) * xj[j];
        for (int k = 0; k < n; ++k) {
          const double c = germ.d3[a](i, j, k);
          if (c != 0.0) fi += (0.5 * c) * (xj[j] * xj[k]);
        }
      }
      ya += uj[i] * fi;
    }
    Y.push_back(std::move(ya));
  }
  const Jet4 E = evaluate_on_jets(norm, Y);  // = S^2 / 2

  std::vector<Jet4> Eu;
  for (int i = 0; i < n; ++i) Eu.push_back(E.partial(i));
  JetMat g;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g.push_back(Eu[i].partial(j));
  const JetMat ginv = jet_inverse(g, n);

  std::vector<Jet4> rhs;
  for (int j = 0; j < n; ++j) {
    Jet4 r = -E.partial(n + j);
    for (int k = 0; k < n; ++k) r += uj[k] * Eu[j].partial(n + k);
    rhs.push_back(std::move(r));
  }
  std::vector<Jet4> G;
  for (int i = 0; i < n; ++i) {
    Jet4 s = ginv[i * n] * rhs[0];
    for (int j = 1; j < n; ++j) s += ginv[i * n + j] * rhs[j];
    G.push_back(0.5 * s);
  }

  double ric = 0.0;
  for (int i = 0; i < n; ++i) {
    const int k = i;
    double r = 2.0 * jet_partial(G[i], {n + k});
    for (int j = 0; j < n; ++j) {
      r -= u[j] * jet_partial(G[i], {n + j, k});
      r += 2.0 * G[j].value() * jet_partial(G[i], {j, k});
      r -= jet_partial(G[i], {j}) * jet_partial(G[j], {k});
    }
    ric += r;
  }
  return ric;
}

// ---- Finite-difference oracle: difference the closed spray formula. ----

Eigen::VectorXd spray_pointwise(const NormModel& norm, const Germ& germ,
                                const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
  const int n = germ.n;
  const int p = germ.p;
  Eigen::MatrixXd F1(p, n);  // f^a_i(x)
  Eigen::VectorXd kap(p);    // f^a_kl(x) u^k u^l
  for (int a = 0; a < p; ++a) {
    const Eigen::MatrixXd T = germ.d3[a].contract(x);
    F1.row(a) = (germ.d2[a] * x + 0.5 * T * x).transpose();
    kap[a] = u.dot((germ.d2[a] + T) * u);
  }
  Eigen::VectorXd Y(n + p);
  Y.head(n) = u;
  Y.tail(p) = F1 * u;
  const Eigen::MatrixXd Hs = hessian(norm_jet(norm, Y, 2));
  const Eigen::MatrixXd Hii = Hs.topLeftCorner(n, n);
  const Eigen::MatrixXd Hia = Hs.topRightCorner(n, p);
  const Eigen::MatrixXd Hab = Hs.bottomRightCorner(p, p);
  const Eigen::MatrixXd g =
      Hii + Hia * F1 + (Hia * F1).transpose() + F1.transpose() * Hab * F1;
  const Eigen::VectorXd w = (Hia + F1.transpose() * Hab) * kap;
  return 0.5 * checked_inverse(0.5 * (g + g.transpose())) * w;
}

double oracle_fd(const NormModel& norm, const Germ& germ, const Eigen::VectorXd& u,
                 const OracleOptions& opt) {
  const int n = germ.n;
  const double eps = std::numeric_limits<double>::epsilon();
  const double hu = opt.u_step * (1.0 + u.norm());
  const double hx = opt.x_step;
  if (!(hu > 64.0 * eps * (1.0 + u.norm())) || !std::isfinite(hu))
    throw StepUnderflow("u step is too small for finite differences");
  if (!(hx > 64.0 * eps) || !std::isfinite(hx))
    throw StepUnderflow("x step is too small for finite differences");

  // z = (x, u); variables 0..n-1 are x, n..2n-1 are u.
  Eigen::VectorXd z0(2 * n);
  z0.head(n).setZero();
  z0.tail(n) = u;
  auto G = [&](const Eigen::VectorXd& z) {
    return spray_pointwise(norm, germ, z.head(n), z.tail(n));
  };
  auto step = [&](int v) { return v < n ? hx : hu; };
  auto d1 = [&](int a, double scale) {
    const double h = step(a) * scale;
    Eigen::VectorXd zp = z0, zm = z0;
    zp[a] += h;
    zm[a] -= h;
    return Eigen::VectorXd((G(zp) - G(zm)) / (2.0 * h));
  };
  auto d2 = [&](int a, int b, double scale) {
    const double ha = step(a) * scale;
    const double hb = step(b) * scale;
    auto at = [&](double sa, double sb) {
      Eigen::VectorXd z = z0;
      z[a] += sa * ha;
      z[b] += sb * hb;
      return G(z);
    };
    return Eigen::VectorXd((at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * ha * hb));
  };
  auto rich1 = [&](int a) { return Eigen::VectorXd((4.0 * d1(a, 0.5) - d1(a, 1.0)) / 3.0); };
  auto rich2 = [&](int a, int b) {
    return Eigen::VectorXd((4.0 * d2(a, b, 0.5) - d2(a, b, 1.0)) / 3.0);
  };

  const Eigen::VectorXd G0 = G(z0);
  std::vector<Eigen::VectorXd> dGx(n), dGu(n);
  for (int j = 0; j < n; ++j) {
    dGx[j] = rich1(j);
    dGu[j] = rich1(n + j);
  }
  double ric = 0.0;
  for (int k = 0; k < n; ++k) {
    const int i = k;
    double r = 2.0 * dGx[k][i];
    for (int j = 0; j < n; ++j) {
      r -= u[j] * rich2(j, n + k)[i];
      r += 2.0 * G0[j] * rich2(n + j, n + k)[i];
      r -= dGu[j][i] * dGu[k][j];
    }
    ric += r;
  }
  return ric;
}

}  // namespace

Eigen::MatrixXd fundamental_tensor(const NormModel& norm, const Germ& germ,
                                   const Eigen::VectorXd& u) {
  check_inputs(norm, germ, u);
  const Eigen::MatrixXd g = hessian(norm_jet(norm, lift(germ, u), 2))
                                .topLeftCorner(germ.n, germ.n);
  checked_inverse(g);
  return g;
}

Eigen::VectorXd spray_at_origin(const NormModel& norm, const Germ& germ,
                                const Eigen::VectorXd& u) {
  check_inputs(norm, germ, u);
  const Eigen::MatrixXd Hs = hessian(norm_jet(norm, lift(germ, u), 2));
  const Eigen::MatrixXd ginv = checked_inverse(Hs.topLeftCorner(germ.n, germ.n));
  const Eigen::MatrixXd h = ginv * Hs.topRightCorner(germ.n, germ.p);
  return 0.5 * h * germ.kappa(u);
}

CurvatureReport ricci_expanded(const NormModel& norm, const Germ& germ,
                               const Eigen::VectorXd& u) {
  check_inputs(norm, germ, u);
  const int n = germ.n;
  const int p = germ.p;
  const int N = n + p;
  const Jet4 H = norm_jet(norm, lift(germ, u), 4);

  // Second partials of H along the lift u -> (u, 0), as jets in u.
  std::vector<Jet4> first;
  for (int a = 0; a < N; ++a) first.push_back(H.partial(a));
  auto second = [&](int a, int b) { return first[a].partial(b).restrict_leading(n); };

  JetMat gj(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) gj[i * n + j] = gj[j * n + i] = second(i, j);
  JetMat Hja(n * p);
  for (int j = 0; j < n; ++j)
    for (int a = 0; a < p; ++a) Hja[j * p + a] = second(j, n + a);
  JetMat Hab(p * p);
  for (int a = 0; a < p; ++a)
    for (int b = 0; b <= a; ++b) Hab[a * p + b] = Hab[b * p + a] = second(n + a, n + b);

  const JetMat ginv = jet_inverse(gj, n);
  JetMat hj(n * p);  // h^i_a
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < p; ++a) {
      Jet4 s = ginv[i * n] * Hja[a];
      for (int j = 1; j < n; ++j) s += ginv[i * n + j] * Hja[j * p + a];
      hj[i * p + a] = std::move(s);
    }
  }
  JetMat zj(p * p);  // zeta_ab = H_ab - h^s_a H_sb
  for (int a = 0; a < p; ++a) {
    for (int b = 0; b < p; ++b) {
      Jet4 s = Hab[a * p + b];
      for (int t = 0; t < n; ++t) s -= hj[t * p + a] * Hja[t * p + b];
      zj[a * p + b] = std::move(s);
    }
  }

  CurvatureReport r;
  r.u = u;
  r.S = std::sqrt(2.0 * H.value());
  r.g.resize(n, n);
  Eigen::MatrixXd gi(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      r.g(i, j) = gj[i * n + j].value();
      gi(i, j) = ginv[i * n + j].value();
    }
  }
  r.h.resize(n, p);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < p; ++a) r.h(i, a) = hj[i * p + a].value();
  r.zeta.resize(p, p);
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b) r.zeta(a, b) = zj[a * p + b].value();

  // dh[(i * p + a) * n + k] = d h^i_a / du^k
  std::vector<double> dh(n * p * n);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < p; ++a)
      for (int k = 0; k < n; ++k) dh[(i * p + a) * n + k] = jet_partial(hj[i * p + a], {k});
  auto DH = [&](int i, int a, int k) { return dh[(i * p + a) * n + k]; };

  // W^i_ab = g^{ij} d zeta_ab / du^j and V^{ij}_ab = g^{ij} zeta_ab; keep
  // values and first u-derivatives.
  std::vector<double> W(n * p * p), dW(n * p * p * n), dV(n * n * p * p * n);
  for (int ab = 0; ab < p * p; ++ab) {
    std::vector<Jet4> dz;
    for (int j = 0; j < n; ++j) dz.push_back(zj[ab].partial(j));
    for (int i = 0; i < n; ++i) {
      Jet4 w = ginv[i * n] * dz[0];
      for (int j = 1; j < n; ++j) w += ginv[i * n + j] * dz[j];
      W[i * p * p + ab] = w.value();
      for (int k = 0; k < n; ++k) dW[(i * p * p + ab) * n + k] = jet_partial(w, {k});
      for (int j = 0; j < n; ++j) {
        const Jet4 v = ginv[i * n + j] * zj[ab];
        for (int k = 0; k < n; ++k)
          dV[((i * n + j) * p * p + ab) * n + k] = jet_partial(v, {k});
      }
    }
  }
  auto Wv = [&](int i, int a, int b) { return W[i * p * p + a * p + b]; };
  auto DW = [&](int i, int a, int b, int k) { return dW[(i * p * p + a * p + b) * n + k]; };
  auto DV = [&](int i, int j, int a, int b, int k) {
    return dV[((i * n + j) * p * p + a * p + b) * n + k];
  };

  r.kappa = germ.kappa(u);
  const Eigen::VectorXd cub = germ.cubic(u);
  Eigen::MatrixXd Au(n, p);  // column a: f^a_jl u^l
  for (int a = 0; a < p; ++a) Au.col(a) = germ.d2[a] * u;
  const Eigen::VectorXd& kap = r.kappa;
  r.G = 0.5 * r.h * kap;

  // Ricci tensor, group by group.
  r.Rik = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      double t = 0.0;
      for (int a = 0; a < p; ++a) t -= 0.5 * DH(i, a, k) * cub[a];
      for (int a = 0; a < p; ++a) {
        for (int b = 0; b < p; ++b) {
          double c2 = 0.5 * DW(i, a, b, k);
          for (int j = 0; j < n; ++j) c2 += 0.75 * DH(i, a, j) * DH(j, b, k);
          t -= c2 * kap[a] * kap[b];

          for (int j = 0; j < n; ++j) {
            const double c3 = 1.5 * DH(i, a, k) * r.h(j, b) - 0.5 * DV(i, j, a, b, k);
            t += c3 * kap[b] * Au(j, a);
          }

          t -= 0.5 * Wv(i, a, b) * kap[b] * Au(k, a);

          double c5 = 0.0;
          for (int l = 0; l < n; ++l)
            c5 += gi(i, l) * (germ.d2[b](k, l) * kap[a] - Au(l, b) * Au(k, a));
          t += r.zeta(a, b) * c5;
        }
      }
      r.Rik(i, k) = t;
    }
  }

  r.xi.resize(p);
  for (int a = 0; a < p; ++a) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += DH(i, a, i);
    r.xi[a] = -0.5 * s;
  }
  r.eta.resize(p, p);
  for (int a = 0; a < p; ++a) {
    for (int b = 0; b < p; ++b) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) s += 0.75 * DH(i, a, j) * DH(j, b, i);
        s += 0.5 * DW(i, a, b, i);
      }
      r.eta(a, b) = s;
    }
  }
  r.rho.assign(n, Eigen::MatrixXd(p, p));
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < p; ++a) {
      for (int b = 0; b < p; ++b) {
        double s = 3.0 * r.xi[a] * r.h(i, b) + 0.5 * Wv(i, a, b);
        for (int j = 0; j < n; ++j) s += 0.5 * DV(i, j, a, b, j);
        r.rho[i](a, b) = s;
      }
    }
  }

  double g1 = 0.0, g2 = 0.0, g3 = 0.0, g4 = 0.0;
  for (int a = 0; a < p; ++a) {
    g1 += r.xi[a] * cub[a];
    for (int b = 0; b < p; ++b) {
      const double tr = (gi * germ.d2[b]).trace();
      g2 += r.zeta(a, b) * (tr * kap[a] - Au.col(b).dot(gi * Au.col(a)));
      g3 -= r.eta(a, b) * kap[a] * kap[b];
      for (int i = 0; i < n; ++i) g4 -= r.rho[i](a, b) * kap[b] * Au(i, a);
    }
  }
  r.ric_terms = {g1, g2, g3, g4};
  r.Ric = g1 + g2 + g3 + g4;
  return r;
}

double ricci_oracle(const NormModel& norm, const Germ& germ, const Eigen::VectorXd& u,
                    OracleScheme scheme, const OracleOptions& options) {
  check_inputs(norm, germ, u);
  return scheme == OracleScheme::Jet ? oracle_jet(norm, germ, u)
                                     : oracle_fd(norm, germ, u, options);
}

ZetaCheck zeta_check(const NormModel& norm, const Germ& germ, const Eigen::VectorXd& u) {
  check_inputs(norm, germ, u);
  const int n = germ.n;
  const int p = germ.p;
  const Eigen::MatrixXd Hs = hessian(norm_jet(norm, lift(germ, u), 2));
  const Eigen::MatrixXd g = Hs.topLeftCorner(n, n);
  const Eigen::MatrixXd Hia = Hs.topRightCorner(n, p);
  ZetaCheck out;
  out.zeta = Hs.bottomRightCorner(p, p) - Hia.transpose() * checked_inverse(g) * Hia;
  out.zeta = 0.5 * (out.zeta + out.zeta.transpose()).eval();

  const double det_n = g.determinant();
  for (int a = 0; a < p; ++a) {
    Eigen::MatrixXd bordered(n + 1, n + 1);
    bordered.topLeftCorner(n, n) = g;
    bordered.topRightCorner(n, 1) = Hia.col(a);
    bordered.bottomLeftCorner(1, n) = Hia.col(a).transpose();
    bordered(n, n) = Hs(n + a, n + a);
    out.residual =
        std::max(out.residual, std::abs(out.zeta(a, a) - bordered.determinant() / det_n));
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.zeta, Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues()[0] > 0.0)) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "zeta is not positive definite (min eigenvalue %.3g)",
                  es.eigenvalues()[0]);
    throw NonPDZeta(buf);
  }
  return out;
}

void write_curvature_csv(std::ostream& out, const std::vector<CurvatureReport>& rows) {
  if (rows.empty()) return;
  const int n = static_cast<int>(rows.front().u.size());
  const int p = static_cast<int>(rows.front().kappa.size());
  std::vector<std::string> head;
  auto name = [](const char* base, std::initializer_list<int> idx) {
    std::string s = base;
    for (int i : idx) s += "_" + std::to_string(i + 1);
    return s;
  };
  for (int i = 0; i < n; ++i) head.push_back(name("u", {i}));
  head.push_back("S");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) head.push_back(name("g", {i, j}));
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < p; ++a) head.push_back(name("h", {i, a}));
  for (int a = 0; a < p; ++a) head.push_back(name("kappa", {a}));
  for (int i = 0; i < n; ++i) head.push_back(name("G", {i}));
  for (int a = 0; a < p; ++a) head.push_back(name("xi", {a}));
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b) head.push_back(name("zeta", {a, b}));
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b) head.push_back(name("eta", {a, b}));
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < p; ++a)
      for (int b = 0; b < p; ++b) head.push_back(name("rho", {i, a, b}));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) head.push_back(name("Rik", {i, k}));
  for (const char* h : {"Ric", "ric_cubic", "ric_zeta", "ric_eta", "ric_rho"}) head.push_back(h);

  for (std::size_t c = 0; c < head.size(); ++c) out << (c ? "," : "") << head[c];
  out << '\n';

  char buf[32];
  for (const auto& r : rows) {
    if (r.u.size() != n || r.kappa.size() != p)
      throw std::invalid_argument("curvature rows have mixed dimensions");
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(r.u[i]);
    v.push_back(r.S);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) v.push_back(r.g(i, j));
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < p; ++a) v.push_back(r.h(i, a));
    for (int a = 0; a < p; ++a) v.push_back(r.kappa[a]);
    for (int i = 0; i < n; ++i) v.push_back(r.G[i]);
    for (int a = 0; a < p; ++a) v.push_back(r.xi[a]);
    for (int a = 0; a < p; ++a)
      for (int b = 0; b < p; ++b) v.push_back(r.zeta(a, b));
    for (int a = 0; a < p; ++a)
      for (int b = 0; b < p; ++b) v.push_back(r.eta(a, b));
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < p; ++a)
        for (int b = 0; b < p; ++b) v.push_back(r.rho[i](a, b));
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) v.push_back(r.Rik(i, k));
    v.push_back(r.Ric);
    for (double t : r.ric_terms) v.push_back(t);
    for (std::size_t c = 0; c < v.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", v[c]);
      out << (c ? "," : "") << buf;
    }
    out << '\n';
  }
}

}  // namespace finsub
