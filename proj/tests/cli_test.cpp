#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("listdefect_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int sh(const std::string& args) const {
    const std::string cmd = std::string("\"") + LISTDEFECT_CLI_PATH + "\" " + args + " > \"" +
                            (dir_ / "stdout.txt").string() + "\" 2> \"" + (dir_ / "stderr.txt").string() + "\"";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  json read_json(const std::string& name) const { return json::parse(slurp(path(name))); }
  void write(const std::string& name, const std::string& body) const {
    std::ofstream(path(name)) << body;
  }

  fs::path dir_;
};

}  // namespace

// [TRIVIAL] a ring has Δ = 2, so degree-plus-one lists have 3 colors.
TEST_F(Cli, GenerateRingDegreePlusOne) {
  ASSERT_EQ(sh("generate --family ring --n 8 --lists degree-plus-one --out " + path("g.json")), 0);
  const auto doc = read_json("g.json");
  EXPECT_EQ(doc["n"], 8);
  ASSERT_EQ(doc["lists"].size(), 8u);
  for (const auto& l : doc["lists"]) EXPECT_EQ(l.size(), 3u);
}

TEST_F(Cli, GenerateCliqueDefectBudget) {
  ASSERT_EQ(sh("generate --family clique --n 5 --lists defect-budget --k 2 --seed 4 --out " + path("c.json")), 0);
  const auto doc = read_json("c.json");
  for (const auto& d : doc["defects"]) {
    int sum = 0;
    for (const auto& [c, x] : d.items()) sum += x.get<int>() + 1;
    EXPECT_GE(sum, 5);
  }
}

TEST_F(Cli, GenerateIsSeedDeterministic) {
  ASSERT_EQ(sh("generate --family random-gnp --n 30 --delta 5 --seed 9 --out " + path("a.json")), 0);
  ASSERT_EQ(sh("generate --family random-gnp --n 30 --delta 5 --seed 9 --out " + path("b.json")), 0);
  ASSERT_EQ(sh("generate --family random-gnp --n 30 --delta 5 --seed 10 --out " + path("c.json")), 0);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  EXPECT_NE(slurp(path("a.json")), slurp(path("c.json")));
}

TEST_F(Cli, RunSequentialWritesArtifacts) {
  ASSERT_EQ(sh("generate --family ring --n 8 --out " + path("g.json")), 0);
  ASSERT_EQ(sh("run --instance " + path("g.json") + " --algorithm seq --out-dir " + path("o")), 0);
  const auto rep = read_json("o/report.json");
  EXPECT_EQ(rep["status"], "valid");
  EXPECT_EQ(rep["algorithm"], "seq");
  EXPECT_TRUE(fs::exists(path("o/coloring.json")));
  const auto trace = slurp(path("o/trace.csv"));
  EXPECT_EQ(trace.substr(0, trace.find('\n')), "round,max_bits,nodes_output_so_far,messages,phase");
}

// [DERIVED] K3 with one color of defect 1: Σ(d+1) = 2 = deg, and no coloring exists.
TEST_F(Cli, OracleReportsUnsat) {
  write("k3.json", R"({"n":3,"edges":[[0,1],[1,2],[0,2]],"color_space":[0],"lists":[[0],[0],[0]],)"
                   R"("defects":[{"0":1},{"0":1},{"0":1}],"flavor":"defective","g":0})");
  ASSERT_EQ(sh("run --instance " + path("k3.json") + " --algorithm oracle --out-dir " + path("o")), 0);
  const auto rep = read_json("o/report.json");
  EXPECT_EQ(rep["verdict"], "UNSAT");
}

// Without initial colors Linial starts from ids, which cannot fit in two bits.
TEST_F(Cli, TightBudgetExitsFailFast) {
  const int n = 32;
  json doc{{"n", n}, {"color_space", {0, 1, 2}}, {"flavor", "arbdefective"}, {"g", 0}};
  for (int v = 0; v < n; ++v) {
    doc["edges"].push_back({v, (v + 1) % n});
    doc["lists"].push_back({0, 1, 2});
    doc["defects"].push_back({{"0", 0}, {"1", 0}, {"2", 0}});
  }
  write("g.json", doc.dump());
  EXPECT_EQ(sh("run --instance " + path("g.json") +
               " --algorithm congest-pipeline --tau-override 1,1 --taubar-override 1,1 --h-prime 1 --bits-budget 2 --out-dir " +
               path("o")),
            2);
  const auto rep = read_json("o/report.json");
  EXPECT_EQ(rep["error"]["code"], "BudgetViolation");
}

TEST_F(Cli, RunIsByteDeterministic) {
  ASSERT_EQ(sh("generate --family random-gnp --n 40 --delta 4 --seed 2 --out " + path("g.json")), 0);
  for (const char* out : {"a", "b"})
    ASSERT_EQ(sh("run --instance " + path("g.json") + " --algorithm linial --out-dir " + path(out)), 0);
  for (const char* f : {"report.json", "coloring.json", "trace.csv"})
    EXPECT_EQ(slurp(path(std::string("a/") + f)), slurp(path(std::string("b/") + f))) << f;
}

TEST_F(Cli, MissingInstanceIsAnError) {
  EXPECT_EQ(sh("run --instance " + path("nope.json") + " --algorithm seq --out-dir " + path("o")), 1);
}

TEST_F(Cli, SweepSingleCell) {
  ASSERT_EQ(sh("sweep --families ring --ns 8 --algorithms seq --seeds 1 --out " + path("s.csv")), 0);
  const auto csv = slurp(path("s.csv"));
  EXPECT_EQ(csv, "family,n,seed,algorithm,r,rounds,max_bits,valid,failure\nring,8,1,seq,,0,0,1,\n");
}

TEST_F(Cli, SweepEmptyMatrixIsHeaderOnly) {
  ASSERT_EQ(sh("sweep --families \"\" --ns 8 --algorithms seq --seeds 1 --out " + path("s.csv")), 0);
  EXPECT_EQ(slurp(path("s.csv")), "family,n,seed,algorithm,r,rounds,max_bits,valid,failure\n");
}
