#include "finsub/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "finsub/curvature.hpp"
#include "finsub/errors.hpp"
#include "finsub/pencil.hpp"
#include "finsub/sampling.hpp"

namespace finsub {
namespace {

Eigen::MatrixXd restrict_form(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q) {
  return Q.transpose() * A * Q;
}

Sym3 restrict_cubic(const Sym3& T, const Eigen::MatrixXd& Q) {
  const int n = static_cast<int>(Q.rows());
  const int m = static_cast<int>(Q.cols());
  Sym3 out(m);
  for (int a = 0; a < m; ++a) {
    for (int b = a; b < m; ++b) {
      for (int c = b; c < m; ++c) {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) s += T(i, j, k) * Q(i, a) * Q(j, b) * Q(k, c);
        out.set(a, b, c, s);
      }
    }
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

struct GridMin {
  double value = std::numeric_limits<double>::infinity();
  Eigen::VectorXd arg;
};

GridMin grid_min_ric(const NormModel& norm, const Germ& germ, int grid) {
  const auto dirs = audit_directions(germ.n, grid);
  std::vector<double> ric(dirs.size());
  parallel_for(static_cast<int>(dirs.size()),
               [&](int i) { ric[i] = ricci_expanded(norm, germ, dirs[i]).Ric; });
  GridMin out;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    if (ric[i] < out.value) {
      out.value = ric[i];
      out.arg = dirs[i];
    }
  }
  return out;
}

// Probes the isotropic cone of the complement of L for a common zero of the
// quadratic and cubic forms and returns Ric there.
std::optional<std::pair<double, Eigen::VectorXd>> witness(const NormModel& norm,
                                                          const Germ& germ,
                                                          const NullSpace& L,
                                                          const AuditOptions& opt,
                                                          std::vector<std::string>& notes) {
  const Eigen::MatrixXd Q = null_complement(L);
  const int m = static_cast<int>(Q.cols());
  if (m < 2) return std::nullopt;
  const Eigen::MatrixXd zero2 = Eigen::MatrixXd::Zero(m, m);
  const Sym3 zero3(m);
  const Eigen::MatrixXd phi1 = restrict_form(germ.d2[0], Q);
  const Eigen::MatrixXd phi2 = germ.p > 1 ? restrict_form(germ.d2[1], Q) : zero2;
  const Sym3 psi1 = restrict_cubic(germ.d3[0], Q);
  const Sym3 psi2 = germ.p > 1 ? restrict_cubic(germ.d3[1], Q) : zero3;
  CommonZeroOptions co;
  co.budget = opt.witness_budget;
  co.seed = mix_seed(opt.seed, 0x77697400);
  const auto res = common_zero_search(phi1, phi2, psi1, psi2, co);
  if (!res.found) {
    notes.push_back("no common zero of the quadratic and cubic forms found on the complement "
                    "of the null space (best residual " + fmt(res.residual) + ")");
    return std::nullopt;
  }
  const Eigen::VectorXd u = Q * res.point;
  const double ric = ricci_expanded(norm, germ, u).Ric;
  notes.push_back("witness direction on the isotropic cone has Ric = " + fmt(ric));
  return std::make_pair(ric, u);
}

AuditReport audit_common(const NormModel& norm, const Germ& germ, const AuditOptions& opt,
                         int p_expected, const char* name) {
  if (germ.p != p_expected)
    throw std::invalid_argument(std::string(name) + ": germ has codimension " +
                                std::to_string(germ.p));
  if (norm.dim() != germ.n + germ.p)
    throw std::invalid_argument(std::string(name) + ": norm and germ dimensions differ");
  if (!(opt.ric_tol > 0.0) || !(opt.tol > 0.0))
    throw std::invalid_argument(std::string(name) + ": tolerances must be positive");
  AuditReport rep;
  rep.ric_tol = opt.ric_tol;
  rep.grid = opt.grid > 0 ? opt.grid : (germ.n == 2 ? 720 : 4096);
  const GridMin gm = grid_min_ric(norm, germ, rep.grid);
  rep.min_ric = gm.value;
  rep.argmin = gm.arg;
  rep.mu = nullity(germ, opt.tol).mu;
  TypeOptions to;
  to.seed = opt.seed;
  rep.type = point_type(germ, to);
  return rep;
}

}  // namespace

NullSpace nullity(const Germ& germ, double tol) {
  const int n = germ.n;
  Eigen::MatrixXd stacked(germ.p * n, n);
  for (int a = 0; a < germ.p; ++a) stacked.block(a * n, 0, n, n) = germ.d2[a];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cut = tol * (s.size() ? s[0] : 0.0);
  int rank = 0;
  for (int k = 0; k < s.size(); ++k)
    if (s[k] > cut && s[k] > 0.0) ++rank;
  NullSpace out;
  out.mu = n - rank;
  out.basis = svd.matrixV().rightCols(out.mu);
  return out;
}

Eigen::MatrixXd null_complement(const NullSpace& L) {
  const int n = static_cast<int>(L.basis.rows());
  if (L.mu == 0) return Eigen::MatrixXd::Identity(n, n);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(L.basis, Eigen::ComputeFullU);
  return svd.matrixU().rightCols(n - L.mu);
}

TypeValue point_type(const Germ& germ, const TypeOptions& options) {
  TypeValue t;
  if (germ.p == 1) {
    const Inertia in = inertia(germ.d2[0]);
    t.lower = t.upper = std::min(in.pos, in.neg);
    return t;
  }
  if (germ.p == 2) {
    const NullSpace L = nullity(germ);
    const Eigen::MatrixXd Q = null_complement(L);
    if (Q.cols() == 0) return t;
    const SymPencil P{restrict_form(germ.d2[0], Q), restrict_form(germ.d2[1], Q)};
    try {
      t.lower = t.upper = type_exact(spectral_split(P));
      return t;
    } catch (const NotSemisimple&) {
    } catch (const SingularA2&) {
    }
    t.lower = t.upper = type_sampled(P, std::max(8, options.normal_samples));
    t.exact = false;
    return t;
  }

  // Codimension >= 3: sampled unit normals.
  Rng rng(mix_seed(options.seed, 0x74797065));
  const int samples = std::max(1, options.normal_samples);
  std::vector<Eigen::VectorXd> normals;
  normals.reserve(samples);
  for (int k = 0; k < samples; ++k) normals.push_back(rng.unit_vector(germ.p));
  std::vector<Inertia> in(samples);
  parallel_for(samples, [&](int k) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(germ.n, germ.n);
    for (int a = 0; a < germ.p; ++a) M += normals[k][a] * germ.d2[a];
    in[k] = inertia(M);
  });
  int max_rank = 0;
  for (const auto& i : in) max_rank = std::max(max_rank, i.rank());
  int best = germ.n;
  for (const auto& i : in)
    if (i.rank() == max_rank) best = std::min({best, i.pos, i.neg});
  t.lower = t.upper = best;
  t.exact = false;
  return t;
}

PointInvariants point_invariants(const Germ& germ, double tol, const TypeOptions& options) {
  const NullSpace L = nullity(germ, tol);
  return {L.mu, point_type(germ, options), L.basis};
}

std::string to_string(Verdict v) {
  return v == Verdict::Consistent ? "CONSISTENT" : "VIOLATION";
}

std::vector<Eigen::VectorXd> audit_directions(int n, int grid) {
  if (grid < 1) throw std::invalid_argument("audit grid must be positive");
  return sphere_grid(n, grid);
}

AuditReport audit_hypersurface(const NormModel& norm, const Germ& germ,
                               const AuditOptions& options) {
  AuditReport rep = audit_common(norm, germ, options, 1, "audit_hypersurface");
  if (germ.n < 2) throw std::invalid_argument("audit_hypersurface: needs n >= 2");
  if (rep.type.lower >= 2) {
    if (auto w = witness(norm, germ, nullity(germ, options.tol), options, rep.notes)) {
      if (w->first < rep.min_ric) {
        rep.min_ric = w->first;
        rep.argmin = w->second;
      }
    }
  }
  const Inertia in = inertia(germ.d2[0]);
  const bool semidefinite = in.pos == 0 || in.neg == 0;
  const bool ric_ok = rep.min_ric >= -options.ric_tol;
  const bool type_ok = rep.type.lower != 1;
  if (!ric_ok) rep.notes.push_back("hypothesis Ric >= 0 fails");
  if (!type_ok) rep.notes.push_back("hypothesis t != 1 fails");
  rep.notes.push_back(semidefinite ? "second fundamental form is semidefinite"
                                   : "second fundamental form is indefinite");
  if (ric_ok && type_ok && !semidefinite) rep.verdict = Verdict::Violation;
  return rep;
}

AuditReport audit_codim2(const NormModel& norm, const Germ& germ, const AuditOptions& options) {
  AuditReport rep = audit_common(norm, germ, options, 2, "audit_codim2");
  if (rep.type.lower >= 3) {
    if (auto w = witness(norm, germ, nullity(germ, options.tol), options, rep.notes)) {
      if (w->first < rep.min_ric) {
        rep.min_ric = w->first;
        rep.argmin = w->second;
      }
    }
  }
  if (!rep.type.exact) rep.notes.push_back("type obtained by sampling");
  const bool ric_ok = rep.min_ric >= -options.ric_tol;
  if (!ric_ok) rep.notes.push_back("hypothesis Ric >= 0 fails");
  if (ric_ok && rep.type.lower > 2) rep.verdict = Verdict::Violation;
  return rep;
}

RuledAuditReport audit_ruled(const NormModel& norm, const Germ& germ,
                             const Eigen::VectorXd& ruling_direction,
                             const AuditOptions& options) {
  if (ruling_direction.size() != germ.n || !(ruling_direction.norm() > 0.0))
    throw std::invalid_argument("audit_ruled: ruling direction must be a nonzero n-vector");
  const Eigen::VectorXd u = ruling_direction.normalized();
  const Eigen::VectorXd kappa = germ.kappa(u);
  const Eigen::VectorXd cubic = germ.cubic(u);
  if (kappa.cwiseAbs().maxCoeff() > 1e-10 || cubic.cwiseAbs().maxCoeff() > 1e-10) {
    throw NotRuledDirection("direction is not ruled: |kappa| = " +
                            fmt(kappa.cwiseAbs().maxCoeff()) + ", |cubic| = " +
                            fmt(cubic.cwiseAbs().maxCoeff()));
  }
  if (norm.dim() != germ.n + germ.p)
    throw std::invalid_argument("audit_ruled: norm and germ dimensions differ");

  RuledAuditReport rep;
  rep.ric_tol = options.ric_tol;
  rep.grid = options.grid > 0 ? options.grid : (germ.n == 2 ? 720 : 4096);
  const GridMin gm = grid_min_ric(norm, germ, rep.grid);
  rep.min_ric = gm.value;
  rep.argmin = gm.arg;
  rep.mu = nullity(germ, options.tol).mu;
  TypeOptions to;
  to.seed = options.seed;
  rep.type = point_type(germ, to);
  rep.direction = u;

  const CurvatureReport cr = ricci_expanded(norm, germ, u);
  rep.ric_direction = cr.Ric;
  const Eigen::MatrixXd ginv = cr.g.inverse();
  double reduced = 0.0;
  double defect = 0.0;
  for (int a = 0; a < germ.p; ++a) {
    const Eigen::VectorXd Au = germ.d2[a] * u;
    defect += Au.squaredNorm();
    for (int b = 0; b < germ.p; ++b) reduced -= cr.zeta(a, b) * (germ.d2[b] * u).dot(ginv * Au);
  }
  rep.ric_reduced = reduced;
  rep.kernel_defect = defect;

  const double agree_tol = 1e-9 * (1.0 + std::abs(cr.Ric));
  if (std::abs(cr.Ric - reduced) > agree_tol) {
    rep.verdict = Verdict::Violation;
    rep.notes.push_back("Ric along the ruling differs from the reduced formula by " +
                        fmt(std::abs(cr.Ric - reduced)));
  }
  if (cr.Ric >= -options.ric_tol) {
    // Ric = -sum zeta (A_b u) g^{-1} (A_a u) >= -tol bounds sum |A_a u|^2.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ez(cr.zeta, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eg(ginv, Eigen::EigenvaluesOnly);
    const double bound =
        options.ric_tol / (ez.eigenvalues()[0] * eg.eigenvalues()[0]) + 1e-12;
    if (defect > bound) {
      rep.verdict = Verdict::Violation;
      rep.notes.push_back("Ric >= 0 along the ruling but the direction is not in the null space");
    } else {
      rep.notes.push_back("ruling direction lies in the null space");
    }
  } else {
    rep.notes.push_back("hypothesis Ric >= 0 fails along the ruling");
  }
  return rep;
}

}  // namespace finsub
