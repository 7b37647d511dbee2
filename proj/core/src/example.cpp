#include "finsub/example.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "finsub/curvature.hpp"
#include "finsub/errors.hpp"
#include "finsub/sampling.hpp"

namespace finsub {
namespace {

constexpr double kPi = std::numbers::pi;
// Directions within this angle of the y3 axis are left out of the norm check;
// the norm is only convex away from the axis.
constexpr double kAxisCone = kPi / 4;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double f12_of(const ExampleParams& p) { return std::sqrt(1.0 + p.eps3); }

}  // namespace

void ExampleParams::validate() const {
  if (!(A > 0 && B > 0 && eps1 > 0 && eps2 > 0))
    throw std::invalid_argument("example: A, B, eps1, eps2 must be positive");
  if (!(eps3 >= 0 && C >= 0)) throw std::invalid_argument("example: eps3 and C must be >= 0");
}

std::pair<NormModel, Germ> build_example(const ExampleParams& params) {
  params.validate();
  NormModel norm = NormModel::example4(params.A, params.B, params.eps1, params.eps2);
  Eigen::MatrixXd d2(2, 2);
  const double f12 = f12_of(params);
  d2 << 1.0, f12, f12, 1.0;
  Sym3 d3(2);
  d3.set(0, 0, 1, params.C);
  d3.set(1, 1, 1, -params.C);
  Germ germ = Germ::from_arrays(2, 1, {d2}, {d3});
  return {std::move(norm), std::move(germ)};
}

ClosedFormRic ric_closed_form(const ExampleParams& p, const Eigen::Vector2d& u) {
  const double a = u[0];
  const double b = u[1];
  const double s = a * a + b * b;
  if (!(s > 0.0)) throw SingularDirection("closed form needs a nonzero direction");
  const double A = p.A;
  const double B = p.B;
  const double e1s = p.eps1 * p.eps1;
  const double Ae2 = A * p.eps2;
  const double a2 = a * a, b2 = b * b;
  const double a4 = a2 * a2, b4 = b2 * b2;
  const double a6 = a4 * a2, b6 = b4 * b2;

  ClosedFormRic r;
  r.P = (4 * A * B + 4 * Ae2 - 9 * e1s) * a6 + 3 * (4 * A * B - 20 * Ae2 + 15 * e1s) * a4 * b2 +
        3 * (4 * A * B + 20 * Ae2 - 25 * e1s) * a2 * b4 + (4 * A * B - 4 * Ae2 - e1s) * b6;
  r.Q11 = 6 * a2 *
          ((3 * Ae2 - 3 * e1s) * a6 + (33 * e1s - 51 * Ae2) * a4 * b2 +
           (65 * Ae2 - 65 * e1s) * a2 * b4 + (11 * e1s - 9 * Ae2) * b6);
  r.Q22 = 3 * b2 *
          ((18 * Ae2 - 27 * e1s) * a6 + (115 * e1s - 130 * Ae2) * a4 * b2 +
           (102 * Ae2 - 81 * e1s) * a2 * b4 + (e1s - 6 * Ae2) * b6);
  r.Q12 = 3 * a * b *
          ((24 * Ae2 - 33 * e1s) * a6 + (181 * e1s - 232 * Ae2) * a4 * b2 +
           (232 * Ae2 - 211 * e1s) * a2 * b4 + (23 * e1s - 24 * Ae2) * b6);

  const double f11 = 1.0, f22 = 1.0, f12 = f12_of(p);
  const double det = f11 * f22 - f12 * f12;
  const double line = b * (3 * a2 - b2);  // vanishes on the three lines
  const double cubic = p.C * line;
  const double kappa = f11 * a2 + 2 * f12 * a * b + f22 * b2;
  r.term1 = 2 * p.eps1 * line / (A * s * s) * cubic;
  r.term2 = r.P / (4 * A * A * s * s) * det;
  r.term3 = (r.Q11 * f11 + r.Q12 * f12 + r.Q22 * f22) / (A * A * s * s * s * s) * kappa;
  r.ric = r.term1 + r.term2 + r.term3;
  return r;
}

ExampleConstants example_constants(const ExampleParams& p) {
  ExampleConstants c;
  c.a1 = 4 * p.A * p.B + 4 * p.A * p.eps2 - 9 * p.eps1 * p.eps1;
  c.a2 = p.A * p.eps2 - p.eps1 * p.eps1;
  const double f11 = 1.0, f22 = 1.0, f12 = f12_of(p);
  const double det = f11 * f22 - f12 * f12;
  const double A2 = p.A * p.A;
  c.T_10 = (c.a1 * det + 72 * c.a2 * f11 * f11) / (4 * A2);
  const double r3 = std::sqrt(3.0);
  const double qp = f11 + 3 * f22 + 2 * r3 * f12;
  const double qm = f11 + 3 * f22 - 2 * r3 * f12;
  c.T_1p = (2 * c.a1 * det + 9 * c.a2 * qp * qp) / (2 * A2);
  c.T_1m = (2 * c.a1 * det + 9 * c.a2 * qm * qm) / (2 * A2);
  return c;
}

std::vector<double> example_angles(int grid, int refine) {
  if (grid < 1 || refine < 0) throw std::invalid_argument("example_angles: bad grid");
  std::vector<double> out;
  for (int k = 0; k < grid; ++k) out.push_back(2 * kPi * k / grid);
  // The cubic vanishes on the lines through angles 0, pi/3, 2pi/3.
  for (int line = 0; line < 6; ++line) {
    const double c = line * kPi / 3;
    for (int k = 0; k < refine; ++k) {
      const double off = refine > 1 ? -0.01 + 0.02 * k / (refine - 1) : 0.0;
      double t = std::fmod(c + off, 2 * kPi);
      if (t < 0) t += 2 * kPi;
      out.push_back(t);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

ExampleReport verify_example(const ExampleParams& params, const ExampleOptions& options) {
  if (options.grid < 360) throw std::invalid_argument("verify_example: grid must be >= 360");
  const auto [norm, germ] = build_example(params);
  ExampleReport rep;
  rep.params = params;
  const Eigen::MatrixXd& d2 = germ.d2[0];
  rep.gauss_determinant = d2(0, 0) * d2(1, 1) - d2(0, 1) * d2(1, 0);
  // Gaussian curvature of the graph at a critical point is det of the Hessian.
  rep.induced_gauss_curvature = rep.gauss_determinant;
  rep.constants = example_constants(params);

  const auto angles = example_angles(options.grid, options.refine);
  rep.rows.resize(angles.size());
  parallel_for(static_cast<int>(angles.size()), [&](int i) {
    const Eigen::Vector2d u(std::cos(angles[i]), std::sin(angles[i]));
    rep.rows[i] = {angles[i], ric_closed_form(params, u).ric,
                   ricci_expanded(norm, germ, Eigen::VectorXd(u)).Ric};
  });
  rep.min_ric = std::numeric_limits<double>::infinity();
  for (const auto& row : rep.rows) {
    const double denom = std::max({std::abs(row.ric_closed), std::abs(row.ric_pipeline), 1e-12});
    rep.max_discrepancy =
        std::max(rep.max_discrepancy, std::abs(row.ric_closed - row.ric_pipeline) / denom);
    if (row.ric_closed < rep.min_ric) {
      rep.min_ric = row.ric_closed;
      rep.argmin_angle = row.angle;
    }
  }

  ValidationOptions vo;
  vo.axis_cone = kAxisCone;
  vo.near_ray_samples = 0;
  vo.seed = options.seed;
  const ValidationReport vr = validate_norm(norm, options.norm_samples, vo);
  rep.norm_valid = vr.valid;
  rep.norm_axis_cone = kAxisCone;

  const bool det_ok = rep.gauss_determinant < 0.0;
  const bool ric_ok = rep.min_ric > 0.0;
  const bool agree_ok = rep.max_discrepancy <= options.discrepancy_tol;
  if (!det_ok) rep.notes.push_back("f11 f22 - f12^2 is not negative");
  if (!ric_ok) {
    rep.notes.push_back("Ric is not positive at angle " + fmt(rep.argmin_angle) +
                        " (min " + fmt(rep.min_ric) + ")");
    const auto& c = rep.constants;
    if (c.T_10 <= 0) rep.notes.push_back("T(1,0) <= 0");
    if (c.T_1p <= 0) rep.notes.push_back("T(1,sqrt3) <= 0");
    if (c.T_1m <= 0) rep.notes.push_back("T(1,-sqrt3) <= 0");
    if (c.a2 <= 0) rep.notes.push_back("a2 = A eps2 - eps1^2 <= 0");
  }
  if (!agree_ok)
    rep.notes.push_back("closed form and pipeline differ by " + fmt(rep.max_discrepancy));
  if (!rep.norm_valid) {
    rep.notes.push_back("norm check failed away from the y3 axis");
    for (const auto& n : vr.notes) rep.notes.push_back(n);
  }
  rep.notes.push_back("closed form reads the last factor as f11 (u1)^2 + 2 f12 u1 u2 + f22 (u2)^2");
  rep.success = det_ok && ric_ok && agree_ok && rep.norm_valid;
  return rep;
}

std::pair<ExampleParams, ExampleReport> find_example_params(int budget,
                                                            const ExampleOptions& options,
                                                            const ExampleAcceptance& accept) {
  if (budget < 1) throw std::invalid_argument("find_example_params: budget must be >= 1");
  const double big[] = {10.0, 100.0, 1000.0};
  const double small[] = {0.1, 0.01, 0.001};
  const double cs[] = {100.0, 1000.0, 10000.0};
  constexpr int kCandidates = 729;
  const int limit = std::min(budget, kCandidates);
  for (int idx = 0; idx < limit; ++idx) {
    // Mixed-radix digits, C varying fastest and A slowest.
    int d[6];
    for (int k = 5, rest = idx; k >= 0; --k, rest /= 3) d[k] = rest % 3;
    const ExampleParams p{big[d[0]], big[d[1]], small[d[2]], small[d[3]], small[d[4]], cs[d[5]]};
    ExampleReport rep = verify_example(p, options);
    if (accept ? accept(rep) : rep.success) return {p, std::move(rep)};
  }
  throw NoParamsFound("no parameters accepted after " + std::to_string(limit) + " candidates");
}

}  // namespace finsub
