#include "finsub/minkowski.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "finsub/errors.hpp"
#include "finsub/sampling.hpp"

namespace finsub {
namespace {

constexpr double kAxisRatio = 1e-12;

double checked_div(double a, double b) {
  if (b == 0.0) throw SingularDirection("norm evaluated at a singular direction");
  return a / b;
}
Jet4 checked_div(const Jet4& a, const Jet4& b) { return a / b; }

double checked_sqrt(double a) {
  if (!(a > 0.0)) throw SingularDirection("norm evaluated at a singular direction");
  return std::sqrt(a);
}
Jet4 checked_sqrt(const Jet4& a) { return sqrt(a); }

template <class T>
T euclidean_h(std::span<const T> y) {
  T s = y[0] * y[0];
  for (std::size_t i = 1; i < y.size(); ++i) s += y[i] * y[i];
  return 0.5 * s;
}

template <class T>
T randers_h(const RandersNorm& r, std::span<const T> y) {
  const int d = static_cast<int>(y.size());
  T q = r.a(0, 0) * (y[0] * y[0]);
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      if (i == 0 && j == 0) continue;
      const double c = i == j ? r.a(i, i) : 2.0 * r.a(i, j);
      if (c != 0.0) q += c * (y[i] * y[j]);
    }
  }
  T beta = r.b[0] * y[0];
  for (int i = 1; i < d; ++i) beta += r.b[i] * y[i];
  T f = checked_sqrt(q) + beta;
  return 0.5 * (f * f);
}

template <class T>
T example4_h(const Example4Norm& e, std::span<const T> y) {
  const T a2 = y[0] * y[0];
  const T b2 = y[1] * y[1];
  const T& z = y[2];
  const T r2 = a2 + b2;
  const T cubic = y[1] * (3.0 * a2 - b2);
  const T a4 = a2 * a2;
  const T b4 = b2 * b2;
  const T sextic = a4 * a2 - 15.0 * (a4 * b2) + 15.0 * (a2 * b4) - b4 * b2;
  const T r6 = r2 * r2 * r2;
  return e.A * r2 + e.eps1 * (z * checked_div(cubic, r2)) +
         (z * z) * (e.B + e.eps2 * checked_div(sextic, r6));
}

template <class T>
T evaluate_h(const NormModel::Source& src, std::span<const T> y) {
  return std::visit(
      [&](const auto& s) -> T {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, EuclideanNorm>) {
          return euclidean_h(y);
        } else if constexpr (std::is_same_v<S, RandersNorm>) {
          return randers_h(s, y);
        } else if constexpr (std::is_same_v<S, Example4Norm>) {
          return example4_h(s, y);
        } else {
          return s.tree.evaluate(y);
        }
      },
      src);
}

void check_point(const NormModel& m, std::size_t size) {
  if (static_cast<int>(size) != m.dim()) {
    throw std::invalid_argument("point of dimension " + std::to_string(size) +
                                " for a norm on R^" + std::to_string(m.dim()));
  }
}

// Angle between y and the nearest excluded ray; +inf when the model has none.
double angle_to_excluded(const NormModel& m, const Eigen::VectorXd& y) {
  if (!std::holds_alternative<Example4Norm>(m.source()))
    return std::numeric_limits<double>::infinity();
  return std::atan2(std::hypot(y[0], y[1]), std::abs(y[2]));
}

struct Sample {
  bool used = false;
  double euler = 0.0;
  double hess_euler = 0.0;
  double min_eig = 0.0;
};

Sample check_direction(const NormModel& m, const Eigen::VectorXd& y, double cone) {
  Sample s;
  if (m.excluded(y) || angle_to_excluded(m, y) < cone) return s;
  Jet4 jet;
  try {
    jet = norm_jet(m, y, 2);
  } catch (const SingularDirection&) {
    return s;
  }
  const int d = m.dim();
  Eigen::VectorXd grad(d);
  Eigen::MatrixXd hess(d, d);
  for (int i = 0; i < d; ++i) {
    grad[i] = jet_partial(jet, {i});
    for (int j = 0; j <= i; ++j) hess(i, j) = hess(j, i) = jet_partial(jet, {i, j});
  }
  const double h = jet.value();
  const double scale = 1.0 + std::abs(h);
  s.used = true;
  s.euler = std::abs(y.dot(grad) - 2.0 * h) / scale;
  s.hess_euler = (hess * y - grad).norm() / scale;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hess, Eigen::EigenvaluesOnly);
  s.min_eig = es.eigenvalues()[0];
  return s;
}

}  // namespace

NormModel NormModel::euclidean(int dim) {
  if (dim < 1) throw std::invalid_argument("norm dimension must be positive");
  return NormModel(dim, EuclideanNorm{});
}

NormModel NormModel::randers(Eigen::MatrixXd a, Eigen::VectorXd b) {
  const auto d = a.rows();
  if (d < 1 || a.cols() != d || b.size() != d)
    throw std::invalid_argument("randers: a must be square and match b");
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + a.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("randers: a is not symmetric");
  a = 0.5 * (a + a.transpose()).eval();
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("randers: a is not positive definite");
  const double bnorm2 = b.dot(llt.solve(b));
  if (!(bnorm2 < 1.0))
    throw std::invalid_argument("randers: b must have a-norm below 1");
  return NormModel(static_cast<int>(d), RandersNorm{std::move(a), std::move(b)});
}

NormModel NormModel::example4(double A, double B, double eps1, double eps2) {
  if (!(A > 0 && B > 0 && eps1 > 0 && eps2 > 0))
    throw std::invalid_argument("example4: parameters must be positive");
  return NormModel(3, Example4Norm{A, B, eps1, eps2});
}

NormModel NormModel::expression(std::string text, int dim) {
  ExprTree tree = parse_norm(text, dim);
  return NormModel(dim, ExpressionNorm{std::move(text), std::move(tree)});
}

std::string NormModel::kind() const {
  switch (source_.index()) {
    case 0:
      return "euclidean";
    case 1:
      return "randers";
    case 2:
      return "example4";
    default:
      return "expression";
  }
}

bool NormModel::excluded(std::span<const double> y) const {
  check_point(*this, y.size());
  double n2 = 0.0;
  for (double v : y) n2 += v * v;
  if (!(n2 > 0.0)) return true;
  if (std::holds_alternative<Example4Norm>(source_))
    return y[0] * y[0] + y[1] * y[1] < kAxisRatio * n2;
  return false;
}

double NormModel::value(std::span<const double> y) const {
  if (excluded(y)) throw SingularDirection("norm evaluated at an excluded direction");
  return evaluate_h(source_, y);
}

Jet4 NormModel::evaluate(std::span<const Jet4> y) const {
  check_point(*this, y.size());
  return evaluate_h(source_, y);
}

Jet4 norm_jet(const NormModel& model, const Eigen::VectorXd& base, int order) {
  if (model.excluded(base))
    throw SingularDirection("norm jet requested at an excluded direction");
  const int d = model.dim();
  std::vector<Jet4> vars;
  vars.reserve(d);
  for (int i = 0; i < d; ++i) vars.push_back(Jet4::variable(d, i, base[i], order));
  try {
    return model.evaluate(vars);
  } catch (const DivisionByZeroJet& e) {
    throw SingularDirection(std::string("norm is singular at this direction: ") + e.what());
  } catch (const NegativeSqrtJet& e) {
    throw SingularDirection(std::string("norm is singular at this direction: ") + e.what());
  }
}

std::string example4_expression(double A, double B, double eps1, double eps2) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "%.17g*(y1^2 + y2^2) + %.17g*y3*(3*y2*y1^2 - y2^3)/(y1^2 + y2^2)"
                " + y3^2*(%.17g + %.17g*(y1^6 - 15*y1^4*y2^2 + 15*y1^2*y2^4 - y2^6)"
                "/(y1^2 + y2^2)^3)",
                A, eps1, B, eps2);
  return buf;
}

ValidationReport validate_norm(const NormModel& model, int samples,
                               const ValidationOptions& options) {
  if (samples < 1) throw std::invalid_argument("validate_norm: samples must be >= 1");
  const int d = model.dim();
  const bool has_rays = std::holds_alternative<Example4Norm>(model.source());

  std::vector<Eigen::VectorXd> dirs;
  Rng rng(mix_seed(options.seed, 0x6e6f726d));
  for (int k = 0; k < samples; ++k) dirs.push_back(rng.unit_vector(d));
  if (has_rays && options.near_ray_samples > 0) {
    // Polar angle log-uniform in [c, 10c] away from the y3 axis.
    const double c = std::max(options.axis_cone, 1e-3);
    for (int k = 0; k < options.near_ray_samples; ++k) {
      const double phi = c * std::pow(10.0, rng.uniform());
      const double psi = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
      Eigen::VectorXd y(3);
      y << std::sin(phi) * std::cos(psi), std::sin(phi) * std::sin(psi),
          sign * std::cos(phi);
      dirs.push_back(y);
    }
  }

  std::vector<Sample> out(dirs.size());
  parallel_for(static_cast<int>(dirs.size()), [&](int i) {
    out[i] = check_direction(model, dirs[i], options.axis_cone);
  });

  ValidationReport rep;
  rep.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Sample& s = out[i];
    if (!s.used) {
      ++rep.skipped;
      continue;
    }
    ++rep.samples;
    rep.euler_residual = std::max(rep.euler_residual, s.euler);
    rep.hessian_euler_residual = std::max(rep.hessian_euler_residual, s.hess_euler);
    if (s.min_eig < rep.min_eigenvalue) {
      rep.min_eigenvalue = s.min_eig;
      rep.argmin = dirs[i];
    }
  }
  if (rep.samples == 0) {
    rep.min_eigenvalue = 0.0;
    rep.notes.push_back("no admissible direction was sampled");
    return rep;
  }
  const bool euler_ok = rep.euler_residual <= options.tolerance &&
                        rep.hessian_euler_residual <= options.tolerance;
  const bool convex = rep.min_eigenvalue > 0.0;
  if (!euler_ok) rep.notes.push_back("degree-2 homogeneity residual above tolerance");
  if (!convex) rep.notes.push_back("Hessian of H is not positive definite at a sampled direction");
  if (rep.skipped > 0)
    rep.notes.push_back(std::to_string(rep.skipped) + " directions skipped as excluded");
  rep.valid = euler_ok && convex;
  return rep;
}

}  // namespace finsub
