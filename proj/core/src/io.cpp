#include "finsub/io.hpp"

#include <fstream>
#include <sstream>

#include "finsub/errors.hpp"

namespace finsub {
namespace {

[[noreturn]] void fail(const std::string& pointer, const std::string& msg) {
  throw SchemaError((pointer.empty() ? std::string("/") : pointer) + ": " + msg);
}

std::string child(const std::string& pointer, const std::string& key) {
  std::string escaped;
  for (char c : key) {
    if (c == '~')
      escaped += "~0";
    else if (c == '/')
      escaped += "~1";
    else
      escaped += c;
  }
  return pointer + "/" + escaped;
}

std::string child(const std::string& pointer, std::size_t idx) {
  return pointer + "/" + std::to_string(idx);
}

const Json& member(const Json& j, const std::string& pointer, const std::string& key) {
  if (!j.is_object()) fail(pointer, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(child(pointer, key), "missing required field");
  return *it;
}

double number(const Json& j, const std::string& pointer) {
  if (!j.is_number()) fail(pointer, "expected a number");
  return j.get<double>();
}

int integer(const Json& j, const std::string& pointer, int lo) {
  if (!j.is_number_integer()) fail(pointer, "expected an integer");
  const auto v = j.get<long long>();
  if (v < lo || v > 1000000) fail(pointer, "integer out of range");
  return static_cast<int>(v);
}

Eigen::VectorXd vector(const Json& j, const std::string& pointer, int size) {
  if (!j.is_array()) fail(pointer, "expected an array");
  if (size >= 0 && static_cast<int>(j.size()) != size)
    fail(pointer, "expected " + std::to_string(size) + " entries");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = number(j[i], child(pointer, i));
  return v;
}

Eigen::MatrixXd matrix(const Json& j, const std::string& pointer, int rows, int cols) {
  if (!j.is_array()) fail(pointer, "expected an array of rows");
  if (rows < 0) rows = static_cast<int>(j.size());
  if (static_cast<int>(j.size()) != rows) fail(pointer, "expected " + std::to_string(rows) + " rows");
  if (rows == 0) fail(pointer, "empty matrix");
  if (cols < 0) cols = j[0].is_array() ? static_cast<int>(j[0].size()) : 0;
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) m.row(r) = vector(j[r], child(pointer, r), cols).transpose();
  return m;
}

Sym3 cubic(const Json& j, const std::string& pointer, int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    fail(pointer, "expected an n x n x n array with n = " + std::to_string(n));
  Sym3 t(n);
  for (int i = 0; i < n; ++i) {
    const Eigen::MatrixXd slice = matrix(j[i], child(pointer, i), n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) t.raw(i, a, b) = slice(a, b);
  }
  t.symmetrize();
  return t;
}

Eigen::MatrixXd symmetric(const Json& j, const std::string& pointer, int n) {
  Eigen::MatrixXd m = matrix(j, pointer, n, n);
  if (m.rows() != m.cols()) fail(pointer, "expected a square matrix");
  const double scale = 1.0 + m.cwiseAbs().maxCoeff();
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    fail(pointer, "matrix is not symmetric");
  return 0.5 * (m + m.transpose());
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail("", std::string("invalid JSON: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

NormModel norm_from_json(const Json& j, const std::string& pointer) {
  const Json& kind_j = member(j, pointer, "kind");
  if (!kind_j.is_string()) fail(child(pointer, "kind"), "expected a string");
  const std::string kind = kind_j.get<std::string>();
  try {
    if (kind == "euclidean") {
      return NormModel::euclidean(integer(member(j, pointer, "dim"), child(pointer, "dim"), 1));
    }
    if (kind == "randers") {
      const std::string pa = child(pointer, "a");
      const Eigen::MatrixXd a = symmetric(member(j, pointer, "a"), pa, -1);
      const Eigen::VectorXd b =
          vector(member(j, pointer, "b"), child(pointer, "b"), static_cast<int>(a.rows()));
      try {
        return NormModel::randers(a, b);
      } catch (const std::invalid_argument& e) {
        fail(pointer, e.what());
      }
    }
    if (kind == "example4") {
      double v[4];
      const char* keys[4] = {"A", "B", "eps1", "eps2"};
      for (int k = 0; k < 4; ++k) {
        v[k] = number(member(j, pointer, keys[k]), child(pointer, keys[k]));
        if (!(v[k] > 0)) fail(child(pointer, keys[k]), "must be positive");
      }
      return NormModel::example4(v[0], v[1], v[2], v[3]);
    }
    if (kind == "expression") {
      const int dim = integer(member(j, pointer, "dim"), child(pointer, "dim"), 1);
      const Json& text = member(j, pointer, "text");
      if (!text.is_string()) fail(child(pointer, "text"), "expected a string");
      return NormModel::expression(text.get<std::string>(), dim);
    }
  } catch (const SyntaxError& e) {
    fail(child(pointer, "text"), e.what());
  } catch (const UnknownVariable& e) {
    fail(child(pointer, "text"), e.what());
  } catch (const ArityError& e) {
    fail(child(pointer, "text"), e.what());
  }
  fail(child(pointer, "kind"), "unknown norm kind '" + kind + "'");
}

Germ germ_from_json(const Json& j, const std::string& pointer) {
  const int n = integer(member(j, pointer, "n"), child(pointer, "n"), 1);
  const int p = integer(member(j, pointer, "p"), child(pointer, "p"), 1);
  const std::string p2 = child(pointer, "d2");
  const Json& d2j = member(j, pointer, "d2");
  if (!d2j.is_array() || static_cast<int>(d2j.size()) != p)
    fail(p2, "expected " + std::to_string(p) + " matrices");
  std::vector<Eigen::MatrixXd> d2;
  for (int a = 0; a < p; ++a) d2.push_back(matrix(d2j[a], child(p2, a), n, n));
  std::vector<Sym3> d3(p, Sym3(n));
  if (j.contains("d3")) {
    const std::string p3 = child(pointer, "d3");
    const Json& d3j = j["d3"];
    if (!d3j.is_array() || static_cast<int>(d3j.size()) != p)
      fail(p3, "expected " + std::to_string(p) + " arrays");
    for (int a = 0; a < p; ++a) d3[a] = cubic(d3j[a], child(p3, a), n);
  }
  return Germ::from_arrays(n, p, std::move(d2), std::move(d3));
}

PencilFile pencil_from_json(const Json& j, const std::string& pointer) {
  const Eigen::MatrixXd A1 = symmetric(member(j, pointer, "A1"), child(pointer, "A1"), -1);
  const int N = static_cast<int>(A1.rows());
  const Eigen::MatrixXd A2 = symmetric(member(j, pointer, "A2"), child(pointer, "A2"), N);
  PencilFile f{SymPencil::make(A1, A2), std::nullopt, std::nullopt};
  if (j.contains("psi1")) f.psi1 = cubic(j["psi1"], child(pointer, "psi1"), N);
  if (j.contains("psi2")) f.psi2 = cubic(j["psi2"], child(pointer, "psi2"), N);
  return f;
}

RunConfig config_from_json(const Json& j) {
  if (!j.is_object()) fail("", "expected an object");
  RunConfig c;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() != "norm" && it.key() != "germ" && it.key() != "seed")
      fail(child("", it.key()), "unknown field");
  }
  if (j.contains("norm")) c.norm = j["norm"];
  if (j.contains("germ")) c.germ = j["germ"];
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail("/seed", "expected a nonnegative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  return c;
}

Json to_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Json to_json(const Eigen::MatrixXd& m) {
  Json a = Json::array();
  for (int r = 0; r < m.rows(); ++r) a.push_back(to_json(Eigen::VectorXd(m.row(r).transpose())));
  return a;
}

Json to_json(const Germ& g) {
  Json j;
  j["n"] = g.n;
  j["p"] = g.p;
  j["d2"] = Json::array();
  j["d3"] = Json::array();
  for (int a = 0; a < g.p; ++a) {
    j["d2"].push_back(to_json(g.d2[a]));
    Json t = Json::array();
    for (int i = 0; i < g.n; ++i) {
      Eigen::MatrixXd slice(g.n, g.n);
      for (int k = 0; k < g.n; ++k)
        for (int l = 0; l < g.n; ++l) slice(k, l) = g.d3[a](i, k, l);
      t.push_back(to_json(slice));
    }
    j["d3"].push_back(t);
  }
  return j;
}

Json to_json(const CurvatureReport& r) {
  Json j;
  j["u"] = to_json(r.u);
  j["S"] = r.S;
  j["g"] = to_json(r.g);
  j["h"] = to_json(r.h);
  j["kappa"] = to_json(r.kappa);
  j["G"] = to_json(r.G);
  j["xi"] = to_json(r.xi);
  j["zeta"] = to_json(r.zeta);
  j["eta"] = to_json(r.eta);
  j["rho"] = Json::array();
  for (const auto& m : r.rho) j["rho"].push_back(to_json(m));
  j["Rik"] = to_json(r.Rik);
  j["Ric"] = r.Ric;
  j["ricTerms"] = {{"cubic", r.ric_terms[0]},
                   {"zeta", r.ric_terms[1]},
                   {"eta", r.ric_terms[2]},
                   {"rho", r.ric_terms[3]}};
  return j;
}

Json to_json(const ValidationReport& r) {
  Json j;
  j["valid"] = r.valid;
  j["samples"] = r.samples;
  j["skipped"] = r.skipped;
  j["eulerResidual"] = r.euler_residual;
  j["hessianEulerResidual"] = r.hessian_euler_residual;
  j["minEigenvalue"] = r.min_eigenvalue;
  j["argmin"] = to_json(r.argmin);
  j["notes"] = r.notes;
  return j;
}

Json to_json(const TypeValue& t) {
  if (t.exact) return t.lower;
  return Json{{"lower", t.lower}, {"upper", t.upper}, {"exact", false}};
}

Json to_json(const AuditReport& r) {
  Json j;
  j["minRic"] = r.min_ric;
  j["argminDirection"] = to_json(r.argmin);
  j["type"] = to_json(r.type);
  j["mu"] = r.mu;
  j["verdict"] = to_string(r.verdict);
  j["notes"] = r.notes;
  j["tolerances"] = {{"ric", r.ric_tol}};
  j["grid"] = r.grid;
  return j;
}

Json to_json(const RuledAuditReport& r) {
  Json j = to_json(static_cast<const AuditReport&>(r));
  j["direction"] = to_json(r.direction);
  j["ricDirection"] = r.ric_direction;
  j["ricReduced"] = r.ric_reduced;
  j["kernelDefect"] = r.kernel_defect;
  return j;
}

Json to_json(const SpectralData& s) {
  Json j;
  j["realPairs"] = Json::array();
  for (const auto& p : s.real_pairs) j["realPairs"].push_back({p[0], p[1]});
  j["complexPairs"] = Json::array();
  for (const auto& p : s.complex_pairs) j["complexPairs"].push_back({p[0], p[1]});
  j["basisAngle"] = s.basis_angle;
  return j;
}

Json to_json(const CanonicalData& c) {
  return Json{{"l", c.l}, {"n", c.n}, {"s", c.s}};
}

Json to_json(const TopologyLabel& t) {
  static const char* names[] = {"Empty", "UnitTangentBundleOfSphere", "ProductTwoSpheres",
                                "ProductThreeSpheres", "ConnectedSum"};
  Json j;
  j["case"] = names[static_cast<int>(t.kind)];
  j["spheres"] = t.spheres;
  j["summands"] = Json::array();
  for (const auto& [a, b] : t.summands) j["summands"].push_back({a, b});
  j["dimension"] = t.dimension();
  j["description"] = t.describe();
  return j;
}

Json to_json(const GenericityReport& g) {
  Json j;
  j["detNotIdenticallyZero"] = g.det_not_identically_zero;
  j["semisimple"] = g.semisimple;
  j["smoothIntersection"] = g.smooth_intersection;
  j["smoothSampled"] = g.smooth_sampled;
  if (g.spectral) j["spectral"] = to_json(*g.spectral);
  j["notes"] = g.notes;
  return j;
}

Json to_json(const ExampleParams& p) {
  return Json{{"A", p.A}, {"B", p.B}, {"eps1", p.eps1}, {"eps2", p.eps2}, {"eps3", p.eps3},
              {"C", p.C}};
}

Json to_json(const ExampleReport& r) {
  Json j;
  j["params"] = to_json(r.params);
  j["verdict"] = r.success ? "SUCCESS" : "FAILURE";
  j["gaussDeterminant"] = r.gauss_determinant;
  j["inducedGaussCurvature"] = r.induced_gauss_curvature;
  j["minRic"] = r.min_ric;
  j["argminAngle"] = r.argmin_angle;
  j["maxDiscrepancy"] = r.max_discrepancy;
  j["normValid"] = r.norm_valid;
  j["normAxisCone"] = r.norm_axis_cone;
  j["constants"] = {{"a1", r.constants.a1},
                    {"a2", r.constants.a2},
                    {"T(1,0)", r.constants.T_10},
                    {"T(1,sqrt3)", r.constants.T_1p},
                    {"T(1,-sqrt3)", r.constants.T_1m}};
  j["gridPoints"] = r.rows.size();
  j["notes"] = r.notes;
  return j;
}

}  // namespace finsub
