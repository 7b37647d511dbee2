#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "finsub/curvature.hpp"
#include "finsub/errors.hpp"
#include "finsub/example.hpp"
#include "finsub/invariants.hpp"
#include "finsub/io.hpp"
#include "finsub/pencil.hpp"
#include "finsub/sampling.hpp"

namespace finsub::cli {
namespace {

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::optional<std::uint64_t> seed;
  std::optional<int> grid;
  std::optional<double> tol;
  std::string out;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "Random seed (overrides the config)");
  app->add_option("--grid", c.grid, "Grid or sample count")->check(CLI::PositiveNumber);
  app->add_option("--tol", c.tol, "Tolerance")->check(CLI::PositiveNumber);
  app->add_option("--out", c.out, "Write the report to this file");
}

Eigen::VectorXd parse_vector(const std::string& text, const char* what) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string("cannot parse ") + what + " '" + text + "'");
    }
  }
  if (vals.empty()) throw UsageError(std::string("empty ") + what);
  return Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

struct Loaded {
  RunConfig config;
  std::uint64_t seed = 0;
};

Loaded load(const std::string& path, const Common& c) {
  Loaded l;
  if (!path.empty()) l.config = config_from_json(read_json_file(path));
  l.seed = c.seed ? *c.seed : l.config.seed;
  return l;
}

NormModel need_norm(const RunConfig& c) {
  if (!c.norm) throw SchemaError("/norm: missing required field");
  return norm_from_json(*c.norm, "/norm");
}

Germ need_germ(const RunConfig& c) {
  if (!c.germ) throw SchemaError("/germ: missing required field");
  return germ_from_json(*c.germ, "/germ");
}

void check_dims(const NormModel& norm, const Germ& germ) {
  if (norm.dim() != germ.n + germ.p)
    throw SchemaError("/germ: n + p = " + std::to_string(germ.n + germ.p) +
                      " does not match the norm dimension " + std::to_string(norm.dim()));
}

Json header(const std::string& command, std::uint64_t seed) {
  Json j;
  j["command"] = command;
  j["seed"] = seed;
  return j;
}

CanonicalData canonical_from_flags(int l, const std::string& n, int s) {
  CanonicalData c;
  c.l = l;
  c.s = s;
  if (!n.empty()) {
    const Eigen::VectorXd v = parse_vector(n, "--n");
    for (int i = 0; i < v.size(); ++i) c.n.push_back(static_cast<int>(v[i]));
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return c;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Curvature invariants of submanifold germs in Minkowski spaces", "finsub"};
  app.require_subcommand(1);

  Common common;
  std::string config_path;
  std::string direction;
  std::string pencil_file;
  std::string csv_path;
  int canon_l = -1;
  std::string canon_n;
  int canon_s = 0;
  int budget = 64;
  bool automatic = false;
  ExampleParams params;

  std::string command;
  Json report;
  int code = kOk;
  std::string csv_text;  // ricci-grid writes CSV instead of JSON

  auto* check_norm = app.add_subcommand("check-norm", "Sample the norm for homogeneity and convexity");
  auto* curvature = app.add_subcommand("curvature", "Curvature report in one direction");
  auto* ricci_grid = app.add_subcommand("ricci-grid", "CSV sweep of curvature over directions");
  auto* invariants = app.add_subcommand("invariants", "Relative nullity, type and null basis");
  auto* pencil = app.add_subcommand("pencil", "Two-parameter families of quadratic forms");
  auto* pencil_type = pencil->add_subcommand("type", "Type, spectral data and genericity");
  auto* pencil_classify = pencil->add_subcommand("classify", "Canonical data and topology");
  auto* pencil_zero = pencil->add_subcommand("common-zero", "Common zero of two quadrics and two cubics");
  pencil->require_subcommand(1);
  auto* verify = app.add_subcommand("verify-example", "Check the surface example");
  auto* find = app.add_subcommand("find-params", "Search parameters for the surface example");
  auto* audit = app.add_subcommand("audit", "Check the local curvature propositions");
  auto* cmd_hyper = audit->add_subcommand("hyper", "Hypersurface case");
  auto* cmd_codim2 = audit->add_subcommand("codim2", "Codimension two");
  auto* cmd_ruled = audit->add_subcommand("ruled", "Ruling direction");
  audit->require_subcommand(1);

  for (auto* s : {check_norm, curvature, ricci_grid, invariants, cmd_hyper, cmd_codim2,
                  cmd_ruled}) {
    add_common(s, common);
    s->add_option("--config", config_path, "Config file")->required();
  }
  for (auto* s : {pencil_type, pencil_classify, pencil_zero}) {
    add_common(s, common);
    s->add_option("--file", pencil_file, "Pencil file");
  }
  for (auto* s : {pencil_type, pencil_classify}) {
    s->add_option("--l", canon_l, "Canonical data: l");
    s->add_option("--n", canon_n, "Canonical data: block sizes, comma separated");
    s->add_option("--s", canon_s, "Canonical data: number of hyperbolic pairs");
  }
  pencil_zero->add_option("--budget", budget, "Number of descents")->check(CLI::PositiveNumber);
  curvature->add_option("--direction", direction, "Tangent direction, comma separated")->required();
  cmd_ruled->add_option("--direction", direction, "Ruling direction")->required();
  for (auto* s : {verify, find}) {
    add_common(s, common);
    s->add_option("--csv", csv_path, "Also write (angle, closed form, pipeline) rows");
  }
  verify->add_flag("--auto", automatic, "Search parameters first");
  verify->add_option("--A", params.A);
  verify->add_option("--B", params.B);
  verify->add_option("--eps1", params.eps1);
  verify->add_option("--eps2", params.eps2);
  verify->add_option("--eps3", params.eps3);
  verify->add_option("--C", params.C);
  find->add_option("--budget", budget, "Candidates to verify")->check(CLI::PositiveNumber);

  std::vector<std::string> argv_rest(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(argv_rest.begin(), argv_rest.end());
  try {
    app.parse(argv_rest);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const CLI::App* bad = &app;
    for (auto* s : app.get_subcommands())
      bad = s->get_subcommands().empty() ? s : s->get_subcommands().front();
    err << bad->help();
    return kUsage;
  }

  try {
    if (*check_norm) {
      command = "check-norm";
      const Loaded l = load(config_path, common);
      const NormModel norm = need_norm(l.config);
      ValidationOptions vo;
      vo.seed = l.seed;
      if (common.tol) vo.tolerance = *common.tol;
      const int samples = common.grid.value_or(2000);
      const ValidationReport vr = validate_norm(norm, samples, vo);
      report = header(command, l.seed);
      report["kind"] = norm.kind();
      report["report"] = to_json(vr);
      report["tolerances"] = {{"residual", vo.tolerance}};
      code = vr.valid ? kOk : kFail;
    } else if (*curvature) {
      command = "curvature";
      const Loaded l = load(config_path, common);
      const NormModel norm = need_norm(l.config);
      const Germ germ = need_germ(l.config);
      check_dims(norm, germ);
      const Eigen::VectorXd u = parse_vector(direction, "--direction");
      if (u.size() != germ.n) throw UsageError("--direction needs " + std::to_string(germ.n) + " entries");
      const CurvatureReport cr = ricci_expanded(norm, germ, u);
      const double oracle = ricci_oracle(norm, germ, u, OracleScheme::Jet);
      const double tol = common.tol.value_or(1e-9);
      report = header(command, l.seed);
      report["report"] = to_json(cr);
      report["oracle"] = {{"Ric", oracle}, {"agrees", std::abs(oracle - cr.Ric) <= tol * (1 + std::abs(cr.Ric))}};
      report["tolerances"] = {{"oracle", tol}};
      if (germ.input_asymmetry > kGermAsymmetryWarning)
        report["notes"] = {"germ input was not symmetric; symmetrized"};
      code = report["oracle"]["agrees"].get<bool>() ? kOk : kFail;
    } else if (*ricci_grid) {
      command = "ricci-grid";
      const Loaded l = load(config_path, common);
      const NormModel norm = need_norm(l.config);
      const Germ germ = need_germ(l.config);
      check_dims(norm, germ);
      const auto dirs = audit_directions(germ.n, common.grid.value_or(germ.n == 2 ? 720 : 4096));
      std::vector<CurvatureReport> rows(dirs.size());
      parallel_for(static_cast<int>(dirs.size()),
                   [&](int i) { rows[i] = ricci_expanded(norm, germ, dirs[i]); });
      std::ostringstream csv;
      write_curvature_csv(csv, rows);
      csv_text = csv.str();
    } else if (*invariants) {
      command = "invariants";
      const Loaded l = load(config_path, common);
      const Germ germ = need_germ(l.config);
      const double tol = common.tol.value_or(1e-9);
      TypeOptions to;
      to.seed = l.seed;
      if (common.grid) to.normal_samples = *common.grid;
      const PointInvariants pi = point_invariants(germ, tol, to);
      report = header(command, l.seed);
      report["mu"] = pi.mu;
      report["type"] = to_json(pi.type);
      Json basis = Json::array();
      for (int k = 0; k < pi.mu; ++k) basis.push_back(to_json(Eigen::VectorXd(pi.null_basis.col(k))));
      report["nullBasis"] = basis;
      report["tolerances"] = {{"nullity", tol}};
    } else if (*pencil) {
      const Loaded l = load("", common);
      PencilFile pf;
      std::optional<CanonicalData> canon;
      if (canon_l >= 0) {
        canon = canonical_from_flags(canon_l, canon_n, canon_s);
        pf.pencil = build_canonical(*canon);
      } else if (!pencil_file.empty()) {
        pf = pencil_from_json(read_json_file(pencil_file));
      } else {
        throw UsageError("give --file or canonical data (--l, --n, --s)");
      }
      if (*pencil_type) {
        command = "pencil type";
        const int samples = common.grid.value_or(10000);
        report = header(command, l.seed);
        report["dimension"] = pf.pencil.dim();
        report["typeSampled"] = type_sampled(pf.pencil, samples);
        const GenericityReport g = genericity_check(pf.pencil, l.seed);
        if (g.spectral) report["typeExact"] = type_exact(*g.spectral);
        report["type"] = g.spectral ? report["typeExact"] : report["typeSampled"];
        report["genericity"] = to_json(g);
        report["samples"] = samples;
      } else if (*pencil_classify) {
        command = "pencil classify";
        if (!canon) {
          const SpectralData S = spectral_split(pf.pencil);
          canon = to_canonical(S, common.tol.value_or(1e-6));
          if (!canon) {
            throw Error("real directions are not at canonical angles; no canonical data");
          }
        }
        report = header(command, l.seed);
        report["canonical"] = to_json(*canon);
        report["d"] = canon->d();
        report["typeFormula"] = canon->type_formula();
        report["topology"] = to_json(classify_topology(*canon));
        report["tolerances"] = {{"angle", common.tol.value_or(1e-6)}};
      } else {
        command = "pencil common-zero";
        const int N = pf.pencil.dim();
        CommonZeroOptions co;
        co.budget = budget;
        co.seed = l.seed;
        if (common.tol) co.objective_tol = *common.tol;
        const auto res = common_zero_search(pf.pencil.A1, pf.pencil.A2, pf.psi1.value_or(Sym3(N)),
                                            pf.psi2.value_or(Sym3(N)), co);
        report = header(command, l.seed);
        report["found"] = res.found;
        report["point"] = to_json(res.point);
        report["residual"] = res.residual;
        report["descents"] = res.descents;
        report["tolerances"] = {{"objective", co.objective_tol}};
        code = res.found ? kOk : kFail;
      }
    } else if (*verify || *find) {
      const Loaded l = load("", common);
      ExampleOptions eo;
      eo.seed = l.seed;
      if (common.grid) eo.grid = *common.grid;
      if (common.tol) eo.discrepancy_tol = *common.tol;
      if (eo.grid < 360) throw UsageError("--grid must be at least 360");
      ExampleReport rep;
      if (*find || automatic) {
        command = *find ? "find-params" : "verify-example";
        rep = find_example_params(*find ? budget : 729, eo).second;
      } else {
        command = "verify-example";
        try {
          params.validate();
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
        rep = verify_example(params, eo);
      }
      report = header(command, l.seed);
      report["report"] = to_json(rep);
      report["tolerances"] = {{"discrepancy", eo.discrepancy_tol}};
      if (!csv_path.empty()) {
        std::ofstream f(csv_path);
        if (!f) throw UsageError("cannot write " + csv_path);
        f << "angle,ric_closed,ric_pipeline\n";
        char buf[96];
        for (const auto& row : rep.rows) {
          std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", row.angle, row.ric_closed,
                        row.ric_pipeline);
          f << buf;
        }
      }
      code = rep.success ? kOk : kFail;
    } else if (*audit) {
      const Loaded l = load(config_path, common);
      const NormModel norm = need_norm(l.config);
      const Germ germ = need_germ(l.config);
      check_dims(norm, germ);
      AuditOptions ao;
      ao.seed = l.seed;
      if (common.grid) ao.grid = *common.grid;
      if (common.tol) ao.ric_tol = *common.tol;
      report = header("", l.seed);
      Verdict v;
      if (*cmd_hyper) {
        command = "audit hyper";
        if (germ.p != 1) throw SchemaError("/germ/p: audit hyper needs p = 1");
        const AuditReport r = audit_hypersurface(norm, germ, ao);
        report["report"] = to_json(r);
        v = r.verdict;
      } else if (*cmd_codim2) {
        command = "audit codim2";
        if (germ.p != 2) throw SchemaError("/germ/p: audit codim2 needs p = 2");
        const AuditReport r = audit_codim2(norm, germ, ao);
        report["report"] = to_json(r);
        v = r.verdict;
      } else {
        command = "audit ruled";
        const Eigen::VectorXd u = parse_vector(direction, "--direction");
        if (u.size() != germ.n) throw UsageError("--direction needs " + std::to_string(germ.n) + " entries");
        const RuledAuditReport r = audit_ruled(norm, germ, u, ao);
        report["report"] = to_json(r);
        v = r.verdict;
      }
      report["command"] = command;
      code = v == Verdict::Consistent ? kOk : kFail;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kFail;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  const std::string text = csv_text.empty() ? report.dump(2) + "\n" : csv_text;
  if (common.out.empty()) {
    out << text;
  } else {
    std::ofstream f(common.out);
    if (!f) {
      err << "error: cannot write " << common.out << "\n";
      return kUsage;
    }
    f << text;
  }
  return code;
}

}  // namespace finsub::cli
