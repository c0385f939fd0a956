#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "curvemetrics_app/cli.hpp"

using namespace curvemetrics::app;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

auto run(std::vector<std::string> args) -> Run {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

auto temp_dir(const std::string& name) -> fs::path {
  const auto dir = fs::temp_directory_path() / ("curvemetrics_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

auto slurp(const fs::path& p) -> std::string {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

const std::string kShowcase = std::string(CURVEMETRICS_DATA_DIR) + "/panels/showcase11.json";

}  // namespace

TEST(Cli, EvaluatePrintsValue) {
  const auto r = run({"evaluate", "--scenario", "sigmoid", "--estimate", "C"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_GT(std::stod(r.out), 0.0);
}

TEST(Cli, EvaluateErrorsMapToExitCodes) {
  auto r = run({"evaluate", "--scenario", "sigmoid", "--estimate", "A", "--aggregation", "quantile_Fx"});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_NE(r.err.find("q"), std::string::npos);
  r = run({"evaluate", "--scenario", "sigmoid", "--estimate", "A", "--localization", "point", "--x-star", "3"});
  EXPECT_EQ(r.code, kExitValidation);
  r = run({"evaluate", "--scenario", "sigmoid", "--estimate", "A", "--scope", "interval", "--interval", "2,3"});
  EXPECT_EQ(r.code, kExitDegenerateScope);
  r = run({"evaluate", "--scenario", "nope", "--estimate", "A"});
  EXPECT_EQ(r.code, kExitValidation);
  r = run({"evaluate", "--scenario", "sigmoid", "--estimate", "Q"});
  EXPECT_EQ(r.code, kExitValidation);
  r = run({"evaluate", "--scenario", "sigmoid"});
  EXPECT_EQ(r.code, kExitValidation);
}

TEST(Cli, EvaluateDivergentJson) {
  const auto r = run({"evaluate", "--scenario", "asymptote", "--estimate", "D", "--characteristic",
                      "first_derivative", "--loss", "squared", "--aggregation", "expectation_dFx", "--json"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find(R"("value":"inf")"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find(R"("divergent":true)"), std::string::npos);
}

TEST(Cli, PanelCsvShapeAndIdempotence) {
  const auto dir = temp_dir("panel");
  const auto a = dir / "a.csv";
  const auto b = dir / "b.csv";
  ASSERT_EQ(run({"panel", "--scenario", "unimodal", "--measures", kShowcase, "-o", a.string()}).code, kExitOk);
  ASSERT_EQ(run({"panel", "--scenario", "unimodal", "--preset", "showcase", "--threads", "3", "-o", b.string()}).code,
            kExitOk);
  const auto text = slurp(a);
  EXPECT_EQ(text, slurp(b));
  std::istringstream lines(text);
  std::string line;
  int rows = 0;
  while (std::getline(lines, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 22) << line;
    ++rows;
  }
  EXPECT_EQ(rows, 6);
}

TEST(Cli, PanelErrors) {
  const auto dir = temp_dir("panel_errors");
  const auto empty = dir / "empty.json";
  std::ofstream(empty) << "[]";
  EXPECT_EQ(run({"panel", "--scenario", "sigmoid", "--measures", empty.string()}).code, kExitValidation);
  EXPECT_EQ(run({"panel", "--scenario", "sigmoid", "--preset", "showcase", "-o", "/nonexistent/dir/x.csv"}).code,
            kExitUnwritable);
  EXPECT_EQ(run({"panel", "--scenario", "sigmoid"}).code, kExitValidation);
}

TEST(Cli, PanelJson) {
  const auto r = run({"panel", "--scenario", "asymptote", "--preset", "showcase", "--format", "json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("\"measures\""), std::string::npos);
}

TEST(Cli, FitWritesModel) {
  const auto dir = temp_dir("fit");
  const auto data = dir / "d.csv";
  {
    std::ofstream f(data);
    f << "x,y\n";
    for (int i = 0; i <= 30; ++i) f << i / 30.0 << ',' << std::sin(3.0 * i / 30.0) + 0.01 * (i % 3) << '\n';
  }
  for (const std::vector<std::string> extra : {std::vector<std::string>{"--basis", "linear"},
                                               {"--basis", "polynomial", "--degree", "3"},
                                               {"--basis", "bspline", "--degree", "3", "--n-basis", "6"},
                                               {"--basis", "fp", "--fp-degree", "2"}}) {
    std::vector<std::string> args{"fit", "--data", data.string()};
    args.insert(args.end(), extra.begin(), extra.end());
    const auto r = run(args);
    EXPECT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("\"precision\""), std::string::npos);
  }
  EXPECT_EQ(run({"fit", "--data", (dir / "missing.csv").string()}).code, kExitValidation);
}

TEST(Cli, SimilarityPairAndSingle) {
  auto r = run({"similarity", "--scenario", "sigmoid", "--first", "B", "--second", "C", "--loss", "difference",
                "--aggregation", "max"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out.rfind("max ", 0), 0u);
  EXPECT_NE(r.out.find("\nmin "), std::string::npos);
  r = run({"similarity", "--scenario", "sigmoid", "--first", "B", "--second", "C"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out.find(' '), std::string::npos);
}

TEST(Cli, ScenarioDirectoryFromEnvironment) {
  const auto dir = temp_dir("store");
  ASSERT_EQ(run({"scenarios", "export", "--dir", dir.string()}).code, kExitOk);
  fs::remove(dir / "sigmoid.json");
  ::setenv("CURVEMETRICS_SCENARIO_DIR", dir.c_str(), 1);
  const auto r = run({"scenarios", "list"});
  ::unsetenv("CURVEMETRICS_SCENARIO_DIR");
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out.find("sigmoid"), std::string::npos);
  EXPECT_NE(r.out.find("asymptote"), std::string::npos);
  // Exported files evaluate like the bundled originals.
  const auto a = run({"--scenario-dir", dir.string(), "evaluate", "--scenario", "unimodal", "--estimate", "C"});
  const auto b = run({"evaluate", "--scenario", "unimodal", "--estimate", "C"});
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, BadScenarioDirectory) {
  const auto dir = temp_dir("bad_store");
  std::ofstream(dir / "broken.json") << "{";
  EXPECT_EQ(run({"--scenario-dir", dir.string(), "scenarios", "list"}).code, kExitValidation);
}

TEST(Cli, HelpSucceeds) { EXPECT_EQ(run({"--help"}).code, kExitOk); }
