#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "zmlt/io.hpp"

namespace zmlt {
namespace {

namespace fs = std::filesystem;

const fs::path kFixtures = ZMLT_FIXTURE_DIR;

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("zmlt_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
    return path(name);
  }

  fs::path dir_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST_F(CliTest, FixtureRunWritesEveryArtifact) {
  const auto r = run_cli({"run", "--input", (kFixtures / "graph60.txt").string(), "--config",
                          (kFixtures / "three_levels.conf").string(), "--out", path("out")});
  ASSERT_EQ(r.status, 0) << r.err;
  for (const char* name : {"hierarchy.json", "stage_1.layout.json", "stage_2.layout.json", "stage_3.layout.json",
                           "layout.json", "metrics.json", "nodes.geojson", "edges.geojson", "clusters.geojson"})
    EXPECT_TRUE(fs::exists(dir_ / "out" / name)) << name;
  const auto metrics = read_json_file(dir_ / "out" / "metrics.json");
  ASSERT_EQ(metrics["levels"].size(), 3u);
  for (const auto& row : metrics["levels"]) {
    EXPECT_EQ(row["crossings"], 0);
    EXPECT_EQ(row["overlaps"], 0);
  }
  EXPECT_EQ(metrics["metadata"]["levels"], nlohmann::json({20, 50, 100}));
  EXPECT_EQ(metrics["metadata"]["fonts"], nlohmann::json({24, 16, 10}));
  EXPECT_EQ(metrics["metadata"]["seed"], 7);
  EXPECT_NE(r.out.find("crossings"), std::string::npos);
}

TEST_F(CliTest, MissingInputNamesPath) {
  const auto r = run_cli({"run", "--input", path("absent.txt"), "--out", path("out")});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("zmlt: error: input: IoError"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find(path("absent.txt")), std::string::npos) << r.err;
}

TEST_F(CliTest, BadArguments) {
  EXPECT_EQ(run_cli({}).status, 1);
  EXPECT_EQ(run_cli({"run"}).status, 1);
  const auto r = run_cli({"run", "--input", "x", "--bogus"});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("cli: BadConfig"), std::string::npos);
  const auto bad_levels = run_cli({"extract", "--input", (kFixtures / "graph60.txt").string(), "--levels", "50,40",
                                   "--out", path("out")});
  EXPECT_EQ(bad_levels.status, 1);
  EXPECT_NE(bad_levels.err.find("BadPercentages"), std::string::npos) << bad_levels.err;
  EXPECT_EQ(run_cli({"--help"}).status, 0);
}

TEST_F(CliTest, StagedCommandsMatchRun) {
  const auto input = (kFixtures / "graph60.txt").string();
  const std::vector<std::string> common{"--input", input, "--levels", "30,100", "--fonts", "20,12", "--seed", "3"};
  auto with = [&](std::vector<std::string> head, std::vector<std::string> tail) {
    head.insert(head.end(), common.begin(), common.end());
    head.insert(head.end(), tail.begin(), tail.end());
    return run_cli(head);
  };
  ASSERT_EQ(with({"run"}, {"--out", path("run")}).status, 0);
  ASSERT_EQ(with({"extract"}, {"--out", path("staged")}).status, 0);
  const auto h = path("staged/hierarchy.json");
  ASSERT_EQ(with({"layout"}, {"--hierarchy", h, "--out", path("staged")}).status, 0);
  const auto m = with({"metrics"}, {"--hierarchy", h, "--layout", path("staged/layout.json"), "--out", path("m")});
  ASSERT_EQ(m.status, 0) << m.err;
  ASSERT_EQ(with({"export"}, {"--hierarchy", h, "--layout", path("staged/layout.json"), "--out", path("e")}).status, 0);

  EXPECT_EQ(slurp(dir_ / "run/hierarchy.json"), slurp(dir_ / "staged/hierarchy.json"));
  EXPECT_EQ(slurp(dir_ / "run/layout.json"), slurp(dir_ / "staged/layout.json"));
  EXPECT_EQ(read_json_file(dir_ / "run/metrics.json")["levels"], read_json_file(dir_ / "m/metrics.json")["levels"]);
  EXPECT_EQ(slurp(dir_ / "run/nodes.geojson"), slurp(dir_ / "e/nodes.geojson"));
  EXPECT_EQ(slurp(dir_ / "run/clusters.geojson"), slurp(dir_ / "e/clusters.geojson"));
}

class HandLayout : public CliTest {
 protected:
  void SetUp() override {
    CliTest::SetUp();
    graph_ = write("g.txt", "node a A 3\nnode b B 2\nnode c C 1\nedge a b 1\nedge b c 1\n");
    ASSERT_EQ(run_cli({"extract", "--input", graph_, "--levels", "50,100", "--out", path("")}).status, 0);
  }
  Result metrics(const std::string& positions) {
    const auto layout = write("l.json", R"({"positions": )" + positions + "}");
    return run_cli({"metrics", "--input", graph_, "--levels", "50,100", "--fonts", "10,5", "--hierarchy",
                    path("hierarchy.json"), "--layout", layout, "--out", path("m")});
  }
  std::string graph_;
};

TEST_F(HandLayout, MetricsMatchArithmetic) {
  const auto r = metrics(R"({"a": [0, 0], "b": [4, 0], "c": [4, 2]})");
  ASSERT_EQ(r.status, 0) << r.err;
  const auto rows = read_json_file(dir_ / "m/metrics.json")["levels"];
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_DOUBLE_EQ(rows[0]["DL"].get<double>(), 1.0);
  EXPECT_DOUBLE_EQ(rows[1]["DL"].get<double>(), 0.5);
  EXPECT_NEAR(rows[0]["ST"].get<double>(), 0.0, 1e-12);
  // Pairs (a,b), (b,c), (a,c) at drawn 4, 2, sqrt(20) and hop 1, 1, 2.
  const double alpha = (6.0 + std::sqrt(5.0)) / 25.0;
  const double st = std::pow(4 * alpha - 1, 2) + std::pow(2 * alpha - 1, 2) + std::pow(std::sqrt(20.0) * alpha - 2, 2) / 4;
  EXPECT_NEAR(rows[1]["ST"].get<double>(), st, 1e-12);
  // Level-1 boxes 6 x 12, level-2 box 3 x 6: bounding box 10 x 12.
  EXPECT_NEAR(rows[1]["CM"].get<double>(), 120.0 / 162.0, 1e-12);
  EXPECT_NEAR(rows[0]["CM"].get<double>(), 120.0 / 144.0, 1e-12);
}

TEST_F(HandLayout, MissingPosition) {
  const auto r = metrics(R"({"a": [0, 0], "b": [4, 0]})");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("MissingPosition"), std::string::npos) << r.err;
}

TEST_F(CliTest, BaselineWithDefaults) {
  const auto r = run_cli({"run", "--input", (kFixtures / "graph60.txt").string(), "--baseline", "--out", path("b")});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto base = read_json_file(dir_ / "b/baseline.layout.json");
  EXPECT_EQ(base["crossings"], 0);
  EXPECT_EQ(base["overlaps"], 0);
  const auto metrics = read_json_file(dir_ / "b/metrics.json");
  EXPECT_EQ(metrics["levels"].size(), 8u);
  EXPECT_EQ(metrics["metadata"]["fonts"], nlohmann::json({30, 25, 20, 15, 12, 10, 9, 8}));
  EXPECT_TRUE(fs::exists(dir_ / "b/baseline_metrics.json"));
}

TEST_F(CliTest, DotInput) {
  const auto g = write("g.dot", "graph { a [weight=3]; b [weight=2]; a -- b -- c; c -- d; }");
  const auto r = run_cli({"run", "--input", g, "--format", "dot", "--levels", "50,100", "--out", path("d")});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(read_json_file(dir_ / "d/nodes.geojson")["features"].size(), 4u);
}

}  // namespace
}  // namespace zmlt
