#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "finsub/io.hpp"

namespace {

const std::string kData = FINSUB_TEST_DATA_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "finsub");
  std::ostringstream out, err;
  const int code = finsub::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

finsub::Json report(const Run& r) { return finsub::parse_json(r.out); }

}  // namespace

TEST(Cli, CurvatureParaboloid) {
  const auto r = run({"curvature", "--config", kData + "/euclid_paraboloid.json", "--direction", "1,0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = report(r);
  EXPECT_EQ(j["command"], "curvature");
  EXPECT_NEAR(j["report"]["Ric"].get<double>(), 1.0, 1e-12);
  EXPECT_TRUE(j["oracle"]["agrees"].get<bool>());
}

TEST(Cli, Deterministic) {
  const std::vector<std::string> args{"audit", "codim2", "--config", kData + "/randers_codim2.json", "--grid", "200"};
  const auto a = run(args), b = run(args);
  EXPECT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, PencilType) {
  const auto r = run({"pencil", "type", "--file", kData + "/canonical_l2.json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(report(r)["type"], 1);
}

TEST(Cli, PencilClassify) {
  const auto r = run({"pencil", "classify", "--l", "2", "--n", "1,1,1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = report(r);
  EXPECT_EQ(j["typeFormula"], 1);
  EXPECT_EQ(j["topology"]["case"], "ProductThreeSpheres");
}

TEST(Cli, AuditSaddle) {
  const auto r = run({"audit", "hyper", "--config", kData + "/saddle.json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(report(r)["report"]["verdict"], "CONSISTENT");
}

TEST(Cli, RicciGridCsv) {
  const auto r = run({"ricci-grid", "--config", kData + "/euclid_paraboloid.json", "--grid", "8"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 9);
}

TEST(Cli, OutFile) {
  const auto path = std::filesystem::temp_directory_path() / "finsub_cli_out.json";
  const auto r = run({"invariants", "--config", kData + "/saddle.json", "--out", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = finsub::read_json_file(path.string());
  EXPECT_EQ(j["mu"], 0);
  EXPECT_EQ(j["type"], 1);
  std::filesystem::remove(path);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({"curvature", "--config", kData + "/euclid_paraboloid.json"}).code, 2);
  EXPECT_EQ(run({"nonsense"}).code, 2);
  EXPECT_EQ(run({"curvature", "--config", "/nonexistent.json", "--direction", "1,0"}).code, 2);
  EXPECT_EQ(run({"curvature", "--config", kData + "/euclid_paraboloid.json", "--direction", "1,0,0"}).code, 2);
}

TEST(Cli, SchemaError) {
  const auto path = std::filesystem::temp_directory_path() / "finsub_cli_bad.json";
  std::ofstream(path) << R"({"norm": {"kind": "randers", "a": [[1, 0], [0, "x"]], "b": [0, 0]}})";
  const auto r = run({"check-norm", "--config", path.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("/norm/a/1/1"), std::string::npos);
  std::filesystem::remove(path);
}

TEST(Cli, FailingExampleExitsOne) {
  const auto r = run({"verify-example", "--eps2", "0.01", "--eps3", "0.01"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(report(r)["report"]["verdict"], "FAILURE");
}
