#include "finsub/pencil.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "finsub/errors.hpp"
#include "finsub/sampling.hpp"

namespace finsub {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMaxCondition = 1e10;
constexpr double kClusterTol = 1e-6;
constexpr double kAntipodalTol = 1e-9;

double wrap_angle(double t) {
  t = std::fmod(t, 2.0 * kPi);
  return t < 0.0 ? t + 2.0 * kPi : t;
}

double condition(const Eigen::MatrixXd& M) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& s = svd.singularValues();
  const double lo = s[s.size() - 1];
  return lo > 0.0 ? s[0] / lo : std::numeric_limits<double>::infinity();
}

// Angles tried, in order, for the invertible member of the split.
std::vector<double> split_angles(int N) {
  std::vector<double> out = {kPi / 2, 0.0, kPi / 4, 3 * kPi / 4};
  const int extra = 4 * N + 4;
  for (int k = 0; k < extra; ++k) out.push_back(kPi * (k + 0.5) / extra);
  return out;
}

// Residuals whose zeros are the unit vectors u with phi1(u) = phi2(u) = 0 and
// A1 u, A2 u linearly dependent (2 x 2 minors of [A1 u, A2 u]).
class DependencyResidual : public SphereResidual {
 public:
  explicit DependencyResidual(const SymPencil& P) : P_(P), N_(P.dim()) {}
  int size() const override { return 2 + N_ * (N_ - 1) / 2; }
  void eval(const Eigen::VectorXd& x, Eigen::VectorXd& r, Eigen::MatrixXd& J) const override {
    const Eigen::VectorXd a = P_.A1 * x;
    const Eigen::VectorXd b = P_.A2 * x;
    r.resize(size());
    J.resize(size(), N_);
    r[0] = x.dot(a);
    r[1] = x.dot(b);
    J.row(0) = 2.0 * a.transpose();
    J.row(1) = 2.0 * b.transpose();
    int k = 2;
    for (int i = 0; i < N_; ++i) {
      for (int j = i + 1; j < N_; ++j, ++k) {
        r[k] = a[i] * b[j] - a[j] * b[i];
        J.row(k) = P_.A1.row(i) * b[j] + a[i] * P_.A2.row(j) - P_.A1.row(j) * b[i] -
                   a[j] * P_.A2.row(i);
      }
    }
  }

 private:
  const SymPencil& P_;
  int N_;
};

class CommonZeroResidual : public SphereResidual {
 public:
  CommonZeroResidual(const Eigen::MatrixXd& q1, const Eigen::MatrixXd& q2, const Sym3& c1,
                     const Sym3& c2)
      : q1_(q1), q2_(q2), c1_(c1), c2_(c2) {}
  int size() const override { return 4; }
  void eval(const Eigen::VectorXd& x, Eigen::VectorXd& r, Eigen::MatrixXd& J) const override {
    const int N = static_cast<int>(x.size());
    r.resize(4);
    J.resize(4, N);
    const Eigen::VectorXd a = q1_ * x;
    const Eigen::VectorXd b = q2_ * x;
    const Eigen::MatrixXd T1 = c1_.contract(x);
    const Eigen::MatrixXd T2 = c2_.contract(x);
    r << x.dot(a), x.dot(b), x.dot(T1 * x), x.dot(T2 * x);
    J.row(0) = 2.0 * a.transpose();
    J.row(1) = 2.0 * b.transpose();
    J.row(2) = 3.0 * (T1 * x).transpose();
    J.row(3) = 3.0 * (T2 * x).transpose();
  }

 private:
  const Eigen::MatrixXd& q1_;
  const Eigen::MatrixXd& q2_;
  const Sym3& c1_;
  const Sym3& c2_;
};

// Runs starts 0..budget-1 in parallel batches; returns the lowest-index start
// meeting the tolerance, or the best one.
template <class MakeStart>
std::pair<SphereDescent, int> multistart(const SphereResidual& f, int budget, double tol,
                                         MakeStart make_start) {
  const int batch = std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
  SphereDescent best;
  best.objective = std::numeric_limits<double>::infinity();
  int used = 0;
  for (int first = 0; first < budget; first += batch) {
    const int count = std::min(batch, budget - first);
    std::vector<SphereDescent> out(count);
    parallel_for(count, [&](int i) {
      out[i] = sphere_least_squares(f, make_start(first + i), tol);
    });
    for (int i = 0; i < count; ++i) {
      used = first + i + 1;
      if (out[i].objective < best.objective) best = out[i];
      if (out[i].objective <= tol) return {out[i], used};
    }
  }
  return {best, used};
}

}  // namespace

SymPencil SymPencil::make(Eigen::MatrixXd A1, Eigen::MatrixXd A2) {
  if (A1.rows() != A1.cols() || A2.rows() != A2.cols() || A1.rows() != A2.rows() ||
      A1.rows() == 0)
    throw std::invalid_argument("pencil matrices must be square and of equal size");
  for (const Eigen::MatrixXd* m : {&A1, &A2}) {
    const double scale = 1.0 + m->cwiseAbs().maxCoeff();
    if ((*m - m->transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
      throw std::invalid_argument("pencil matrices must be symmetric");
  }
  SymPencil P;
  P.A1 = 0.5 * (A1 + A1.transpose());
  P.A2 = 0.5 * (A2 + A2.transpose());
  return P;
}

Eigen::MatrixXd SymPencil::at_angle(double theta) const {
  return std::cos(theta) * A1 + std::sin(theta) * A2;
}

double default_tolerance(const Eigen::MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  return 1e-9 * (1.0 + es.eigenvalues().cwiseAbs().maxCoeff());
}

Inertia inertia(const Eigen::MatrixXd& M, double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = es.eigenvalues();
  if (tol < 0.0) tol = 1e-9 * (1.0 + ev.cwiseAbs().maxCoeff());
  Inertia in;
  for (int i = 0; i < ev.size(); ++i) {
    if (ev[i] > tol)
      ++in.pos;
    else if (ev[i] < -tol)
      ++in.neg;
    else
      ++in.zero;
  }
  return in;
}

int type_sampled(const SymPencil& P, int samples) {
  if (samples < 8) throw std::invalid_argument("type_sampled: need at least 8 samples");
  if (P.A1.isZero(0.0) && P.A2.isZero(0.0)) throw ZeroPencil("pencil is identically zero");
  std::vector<Inertia> in(samples);
  parallel_for(samples, [&](int k) {
    in[k] = inertia(P.at_angle(kPi * (k + 0.5) / samples));
  });
  int max_rank = 0;
  for (const auto& i : in) max_rank = std::max(max_rank, i.rank());
  int best = P.dim();
  for (const auto& i : in) {
    if (i.rank() != max_rank) continue;
    // The member at the antipodal angle has pos and neg swapped.
    best = std::min({best, i.pos, i.neg});
  }
  return best;
}

SpectralData spectral_split(const SymPencil& P) {
  const int N = P.dim();
  double theta = 0.0;
  bool found = false;
  for (double t : split_angles(N)) {
    if (condition(P.at_angle(t)) < kMaxCondition) {
      theta = t;
      found = true;
      break;
    }
  }
  if (!found) throw SingularA2("no invertible member found in the pencil");

  const Eigen::MatrixXd M = P.at_angle(theta);
  const Eigen::MatrixXd K = std::sin(theta) * P.A1 - std::cos(theta) * P.A2;
  const Eigen::MatrixXd X = M.partialPivLu().solve(K);
  Eigen::EigenSolver<Eigen::MatrixXd> es(X, false);
  std::vector<std::complex<double>> ev(es.eigenvalues().data(),
                                       es.eigenvalues().data() + N);
  std::sort(ev.begin(), ev.end(), [](auto a, auto b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });

  // Cluster eigenvalues (conjugates with tiny imaginary part merge with each other).
  std::vector<std::vector<std::complex<double>>> clusters;
  std::vector<bool> taken(N, false);
  for (int i = 0; i < N; ++i) {
    if (taken[i]) continue;
    std::vector<std::complex<double>> c = {ev[i]};
    taken[i] = true;
    const double tol = kClusterTol * (1.0 + std::abs(ev[i]));
    const bool near_real = std::abs(ev[i].imag()) <= tol;
    for (int j = i + 1; j < N; ++j) {
      if (taken[j]) continue;
      const bool close = near_real ? std::abs(ev[j] - std::complex<double>(ev[i].real(), 0.0)) <= tol &&
                                         std::abs(ev[j].imag()) <= tol
                                   : std::abs(ev[j] - ev[i]) <= tol;
      if (close) {
        c.push_back(ev[j]);
        taken[j] = true;
      }
    }
    clusters.push_back(std::move(c));
  }

  const bool a2_invertible = condition(P.A2) < kMaxCondition;
  const double scale = M.norm() + K.norm();
  SpectralData out;
  out.basis_angle = theta;
  for (const auto& c : clusters) {
    std::complex<double> mean = 0.0;
    for (auto z : c) mean += z;
    mean /= static_cast<double>(c.size());
    const int m = static_cast<int>(c.size());
    const double tol = kClusterTol * (1.0 + std::abs(mean));
    if (std::abs(mean.imag()) <= tol) {
      const double lam = mean.real();
      const Eigen::MatrixXd D = K - lam * M;
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(D, Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      int nullity = 0;
      for (int k = 0; k < sv.size(); ++k)
        if (sv[k] <= kClusterTol * (1.0 + std::abs(lam)) * scale) ++nullity;
      if (nullity < m) {
        throw NotSemisimple("real eigenvalue " + std::to_string(lam) + " of multiplicity " +
                            std::to_string(m) + " has only " + std::to_string(nullity) +
                            " eigenvectors");
      }
      const Eigen::MatrixXd V = svd.matrixV().rightCols(m);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> bs(V.transpose() * M * V);
      const Eigen::MatrixXd W = V * bs.eigenvectors();
      for (int k = 0; k < m; ++k) {
        const Eigen::VectorXd w = W.col(k);
        Eigen::Vector2d pair(w.dot(P.A1 * w), w.dot(P.A2 * w));
        const double norm = a2_invertible ? std::abs(pair[1]) : pair.norm();
        if (!(norm > 0.0)) throw NotSemisimple("degenerate real eigenvector");
        out.real_pairs.push_back(pair / norm);
      }
    } else if (mean.imag() > 0.0) {
      Eigen::MatrixXcd D = K.cast<std::complex<double>>() - mean * M.cast<std::complex<double>>();
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(D);
      const auto& sv = svd.singularValues();
      int nullity = 0;
      for (int k = 0; k < sv.size(); ++k)
        if (sv[k] <= kClusterTol * (1.0 + std::abs(mean)) * scale) ++nullity;
      if (nullity < m) {
        throw NotSemisimple("complex eigenvalue of multiplicity " + std::to_string(m) +
                            " has only " + std::to_string(nullity) + " eigenvectors");
      }
      for (int k = 0; k < m; ++k) out.complex_pairs.emplace_back(mean.real(), mean.imag());
    }
  }
  if (out.dim() != N) throw NotSemisimple("eigenvalues do not pair into a real normal form");
  return out;
}

SymPencil to_pencil(const SpectralData& S) {
  const int N = S.dim();
  if (N == 0) throw std::invalid_argument("empty spectral data");
  Eigen::MatrixXd A1 = Eigen::MatrixXd::Zero(N, N);
  Eigen::MatrixXd A2 = Eigen::MatrixXd::Zero(N, N);
  int k = 0;
  for (const auto& p : S.real_pairs) {
    A1(k, k) = p[0];
    A2(k, k) = p[1];
    ++k;
  }
  const double c = std::cos(S.basis_angle);
  const double s = std::sin(S.basis_angle);
  for (const auto& q : S.complex_pairs) {
    const double rho = q[0];
    const double nu = q[1];
    Eigen::Matrix2d Kb, Mb;
    Kb << nu, rho, rho, -nu;
    Mb << 0, 1, 1, 0;
    A1.block<2, 2>(k, k) = s * Kb + c * Mb;
    A2.block<2, 2>(k, k) = -c * Kb + s * Mb;
    k += 2;
  }
  return SymPencil{A1, A2};
}

int type_exact(const SpectralData& S) {
  if (S.real_pairs.empty()) return S.s();
  std::vector<double> crit;
  for (const auto& p : S.real_pairs) {
    const double psi = std::atan2(p[1], p[0]);
    crit.push_back(wrap_angle(psi + kPi / 2));
    crit.push_back(wrap_angle(psi - kPi / 2));
  }
  std::sort(crit.begin(), crit.end());
  std::vector<double> uniq;
  for (double t : crit)
    if (uniq.empty() || t - uniq.back() > 1e-12) uniq.push_back(t);
  if (uniq.size() > 1 && uniq.front() + 2 * kPi - uniq.back() <= 1e-12) uniq.pop_back();

  int best = S.r();
  for (std::size_t i = 0; i < uniq.size(); ++i) {
    const double a = uniq[i];
    const double b = i + 1 < uniq.size() ? uniq[i + 1] : uniq[0] + 2 * kPi;
    const double mid = 0.5 * (a + b);
    int count = 0;
    for (const auto& p : S.real_pairs)
      if (std::cos(mid) * p[0] + std::sin(mid) * p[1] > 0.0) ++count;
    best = std::min(best, count);
  }
  return S.s() + best;
}

GenericityReport genericity_check(const SymPencil& P, std::uint64_t seed) {
  GenericityReport rep;
  const int N = P.dim();
  for (int k = 0; k <= 2 * N; ++k) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(P.at_angle(kPi * k / (2 * N + 1)));
    const auto& s = svd.singularValues();
    if (s[N - 1] > 1e-9 * (1.0 + s[0])) {
      rep.det_not_identically_zero = true;
      break;
    }
  }
  if (rep.det_not_identically_zero) {
    try {
      rep.spectral = spectral_split(P);
      rep.semisimple = true;
    } catch (const NotSemisimple& e) {
      rep.notes.push_back(std::string("not semisimple: ") + e.what());
    } catch (const SingularA2& e) {
      rep.notes.push_back(std::string("no well-conditioned member: ") + e.what());
    }
  } else {
    rep.notes.push_back("every member of the pencil is singular");
  }

  if (rep.spectral) {
    rep.smooth_intersection = true;
    const auto& pairs = rep.spectral->real_pairs;
    for (std::size_t i = 0; i < pairs.size() && rep.smooth_intersection; ++i) {
      for (std::size_t j = i + 1; j < pairs.size(); ++j) {
        const double d = std::abs(std::remainder(
            std::atan2(pairs[i][1], pairs[i][0]) - std::atan2(pairs[j][1], pairs[j][0]),
            2 * kPi));
        if (d >= kPi - kAntipodalTol) {
          rep.smooth_intersection = false;
          rep.notes.push_back("antipodal real directions " + std::to_string(i) + " and " +
                              std::to_string(j));
          break;
        }
      }
    }
    return rep;
  }

  // No spectral data: look for a unit u with phi1 = phi2 = 0 and A1 u, A2 u
  // dependent.
  const double scale = std::max(P.A1.norm(), P.A2.norm());
  if (!(scale > 0.0)) {
    rep.smooth_sampled = true;
    rep.notes.push_back("zero pencil");
    return rep;
  }
  const SymPencil Q{P.A1 / scale, P.A2 / scale};
  DependencyResidual f(Q);
  const double tol = 1e-20;
  auto [best, used] = multistart(f, 32, tol, [&](int k) {
    Rng rng(mix_seed(seed, 0x67656e00 + k));
    return rng.unit_vector(N);
  });
  rep.smooth_sampled = true;
  rep.smooth_intersection = best.objective > 1e-12;
  rep.notes.push_back("smoothness decided by sampled minimization over " +
                      std::to_string(used) + " starts");
  return rep;
}

int CanonicalData::r() const {
  int sum = 0;
  for (int v : n) sum += v;
  return sum;
}

void CanonicalData::validate() const {
  if (l < 0 || s < 0) throw std::invalid_argument("canonical data: l and s must be >= 0");
  if (l == 0 && !n.empty()) throw std::invalid_argument("canonical data: l = 0 needs no blocks");
  if (l > 0) {
    if (static_cast<int>(n.size()) != 2 * l - 1)
      throw std::invalid_argument("canonical data: expected 2l - 1 block sizes");
    for (int v : n)
      if (v < 1) throw std::invalid_argument("canonical data: block sizes must be >= 1");
  }
  if (dim() < 1) throw std::invalid_argument("canonical data: empty pencil");
}

std::vector<int> CanonicalData::d() const {
  std::vector<int> out;
  if (l < 2) return out;
  const int m = 2 * l - 1;
  for (int j = 0; j < m; ++j) {
    int sum = 0;
    for (int t = 0; t < l - 1; ++t) sum += n[(j + t) % m];
    out.push_back(sum);
  }
  return out;
}

int CanonicalData::type_formula() const {
  validate();
  if (l < 2) return s;
  const auto dj = d();
  return s + *std::min_element(dj.begin(), dj.end());
}

SymPencil build_canonical(const CanonicalData& C) {
  C.validate();
  const int N = C.dim();
  Eigen::MatrixXd A1 = Eigen::MatrixXd::Zero(N, N);
  Eigen::MatrixXd A2 = Eigen::MatrixXd::Zero(N, N);
  int k = 0;
  const int m = 2 * C.l - 1;
  for (int j = 1; j <= m; ++j) {
    double c = std::cos(2 * kPi * j / m);
    double s = std::sin(2 * kPi * j / m);
    if (j == m) {
      c = 1.0;
      s = 0.0;
    }
    for (int i = 0; i < C.n[j - 1]; ++i, ++k) {
      A1(k, k) = c;
      A2(k, k) = s;
    }
  }
  for (int t = 0; t < C.s; ++t, k += 2) {
    A1(k, k) = 1.0;
    A1(k + 1, k + 1) = -1.0;
    A2(k, k + 1) = A2(k + 1, k) = 1.0;
  }
  return SymPencil{A1, A2};
}

std::optional<CanonicalData> to_canonical(const SpectralData& S, double tol) {
  CanonicalData C;
  C.s = S.s();
  if (S.real_pairs.empty()) {
    if (C.s == 0) return std::nullopt;
    return C;
  }
  std::vector<double> ang;
  for (const auto& p : S.real_pairs) ang.push_back(wrap_angle(std::atan2(p[1], p[0])));
  // Try each odd count 2l - 1 of direction classes up to r.
  for (int l = 1; 2 * l - 1 <= S.r(); ++l) {
    const int m = 2 * l - 1;
    std::vector<int> counts(m, 0);
    bool ok = true;
    for (double a : ang) {
      const double x = a * m / (2 * kPi);
      const double j = std::round(x);
      if (std::abs(x - j) * 2 * kPi / m > tol) {
        ok = false;
        break;
      }
      int idx = static_cast<int>(j) % m;  // class of angle 2 pi j / m
      if (idx == 0) idx = m;
      ++counts[idx - 1];
    }
    if (!ok) continue;
    if (std::any_of(counts.begin(), counts.end(), [](int c) { return c == 0; })) continue;
    C.l = l;
    C.n = counts;
    return C;
  }
  return std::nullopt;
}

int TopologyLabel::dimension() const {
  switch (kind) {
    case Case::Empty:
      return -1;
    case Case::UnitTangentBundleOfSphere:
      return 2 * spheres.at(0) - 1;
    case Case::ProductTwoSpheres:
    case Case::ProductThreeSpheres: {
      int sum = 0;
      for (int d : spheres) sum += d;
      return sum;
    }
    case Case::ConnectedSum:
      return summands.at(0).first + summands.at(0).second;
  }
  return -1;
}

std::string TopologyLabel::describe() const {
  std::ostringstream os;
  auto sphere = [](int d) { return "S^" + std::to_string(d); };
  switch (kind) {
    case Case::Empty:
      os << "empty";
      break;
    case Case::UnitTangentBundleOfSphere:
      os << "unit tangent bundle of " << sphere(spheres[0]);
      break;
    case Case::ProductTwoSpheres:
    case Case::ProductThreeSpheres:
      for (std::size_t i = 0; i < spheres.size(); ++i) os << (i ? " x " : "") << sphere(spheres[i]);
      break;
    case Case::ConnectedSum:
      for (std::size_t i = 0; i < summands.size(); ++i)
        os << (i ? " # " : "") << "(" << sphere(summands[i].first) << " x "
           << sphere(summands[i].second) << ")";
      break;
  }
  return os.str();
}

TopologyLabel classify_topology(const CanonicalData& C) {
  C.validate();
  const int r = C.r();
  const int s = C.s;
  const int l = C.l;
  TopologyLabel t;
  if ((r == 0 && s <= 1) || (r > 0 && l == 1 && s == 0)) {
    t.kind = TopologyLabel::Case::Empty;
  } else if (r == 0 && s > 1) {
    t.kind = TopologyLabel::Case::UnitTangentBundleOfSphere;
    t.spheres = {s - 1};
  } else if (r > 0 && l == 1 && s > 0) {
    t.kind = TopologyLabel::Case::ProductTwoSpheres;
    t.spheres = {s - 1, r + s - 2};
  } else if (r > 0 && l == 2 && s == 0) {
    t.kind = TopologyLabel::Case::ProductThreeSpheres;
    t.spheres = {C.n[0] - 1, C.n[1] - 1, C.n[2] - 1};
  } else if (r > 0 && l >= 2 && l + s > 2) {
    t.kind = TopologyLabel::Case::ConnectedSum;
    for (int dj : C.d()) t.summands.emplace_back(dj + s - 1, r - dj + s - 2);
  } else {
    throw UnclassifiedConfiguration("no topology case for l = " + std::to_string(l) +
                                    ", r = " + std::to_string(r) + ", s = " + std::to_string(s));
  }
  return t;
}

SymPencil perturb(const SymPencil& P, double eps, std::uint64_t seed) {
  Rng rng(mix_seed(seed, 0x70657274));
  return SymPencil{P.A1 + eps * rng.symmetric(P.dim()), P.A2};
}

SphereDescent sphere_least_squares(const SphereResidual& f, const Eigen::VectorXd& x0,
                                   double objective_tol) {
  const int N = static_cast<int>(x0.size());
  Eigen::VectorXd x = x0.normalized();
  Eigen::VectorXd r;
  Eigen::MatrixXd J;
  f.eval(x, r, J);
  double obj = r.squaredNorm();

  // Projected gradient descent with backtracking.
  double step = 1.0;
  for (int it = 0; it < 200 && obj > objective_tol; ++it) {
    Eigen::VectorXd g = 2.0 * J.transpose() * r;
    g -= x.dot(g) * x;
    const double gn2 = g.squaredNorm();
    if (gn2 < 1e-30) break;
    bool accepted = false;
    for (int h = 0; h < 40; ++h) {
      const Eigen::VectorXd xn = (x - step * g).normalized();
      Eigen::VectorXd rn;
      Eigen::MatrixXd Jn;
      f.eval(xn, rn, Jn);
      const double on = rn.squaredNorm();
      if (on <= obj - 1e-4 * step * gn2) {
        const double gain = obj - on;
        x = xn;
        r = rn;
        J = Jn;
        obj = on;
        accepted = true;
        step *= 2.0;
        if (gain < 1e-3 * obj) it = std::max(it, 150);  // slow progress: hand over
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }

  // Damped Gauss-Newton (Levenberg-Marquardt) on the tangent space.
  double mu = 1e-3 * (1.0 + J.squaredNorm());
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(N, N);
  for (int it = 0; it < 100 && obj > 1e-6 * objective_tol; ++it) {
    const Eigen::MatrixXd Pt = I - x * x.transpose();
    const Eigen::MatrixXd Jt = J * Pt;
    Eigen::VectorXd delta =
        (Jt.transpose() * Jt + mu * I).ldlt().solve(-Jt.transpose() * r);
    delta -= x.dot(delta) * x;
    const Eigen::VectorXd xn = (x + delta).normalized();
    Eigen::VectorXd rn;
    Eigen::MatrixXd Jn;
    f.eval(xn, rn, Jn);
    const double on = rn.squaredNorm();
    if (on < obj) {
      x = xn;
      r = rn;
      J = Jn;
      obj = on;
      mu = std::max(mu / 3.0, 1e-15);
    } else {
      mu *= 4.0;
      if (mu > 1e12) break;
    }
  }
  return {x, obj};
}

CommonZeroResult common_zero_search(const Eigen::MatrixXd& phi1, const Eigen::MatrixXd& phi2,
                                    const Sym3& psi1, const Sym3& psi2,
                                    const CommonZeroOptions& options) {
  const int N = static_cast<int>(phi1.rows());
  if (N < 2 || phi1.cols() != N || phi2.rows() != N || phi2.cols() != N || psi1.n() != N ||
      psi2.n() != N)
    throw std::invalid_argument("common_zero_search: forms must share a dimension >= 2");
  if (options.budget < 1) throw std::invalid_argument("common_zero_search: budget must be >= 1");

  CommonZeroResult res;
  const Sym3 zero3(N);
  if (phi1.isZero(0.0) && phi2.isZero(0.0) && psi1 == zero3 && psi2 == zero3) {
    res.found = true;
    res.point = Eigen::VectorXd::Unit(N, 0);
    return res;
  }
  CommonZeroResidual f(phi1, phi2, psi1, psi2);
  auto [best, used] = multistart(f, options.budget, options.objective_tol, [&](int k) {
    Rng rng(mix_seed(options.seed, k));
    return rng.unit_vector(N);
  });
  res.point = best.x;
  res.residual = std::sqrt(best.objective);
  res.descents = used;
  res.found = best.objective <= options.objective_tol;
  return res;
}

}  // namespace finsub
