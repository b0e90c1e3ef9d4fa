#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliRun {
  int status = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(ENTGEOM_CLI) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int raw = pclose(p);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("entgeom_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  void write(const std::string& name, const std::string& text) const { std::ofstream(dir_ / name) << text; }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, MakeMaximalThenInjectiveNorm) {
  ASSERT_EQ(run("make-maximal --dims 2,2 --seed 7 -o " + path("m.json")).status, 0);
  const CliRun r = run("inj-norm " + path("m.json"));
  ASSERT_EQ(r.status, 0);
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["bracket"]["lower"].get<double>(), 0.70710678118654752, 1e-8);
  EXPECT_NEAR(j["bracket"]["upper"].get<double>(), 0.70710678118654752, 1e-8);
  EXPECT_EQ(j["nearest_product"].size(), 2u);
}

TEST_F(Cli, DistanceOfProductIsZero) {
  write("p.json", R"({"dims": [2, 3], "re": [0, 0, 0, 0.6, 0.8, 0], "im": [0, 0, 0, 0, 0, 0]})");
  const CliRun r = run("distance " + path("p.json"));
  ASSERT_EQ(r.status, 0);
  EXPECT_NEAR(json::parse(r.out)["bracket"]["upper"].get<double>(), 0.0, 1e-6);
}

TEST_F(Cli, InnerRadiusSearch) {
  const CliRun r = run("inner-radius --dims 2,2,2 --search --seed 1 --restarts 64");
  ASSERT_EQ(r.status, 0);
  const json j = json::parse(r.out)["result"];
  EXPECT_EQ(j["bracket"]["lower"].get<double>(), 0.5);
  EXPECT_TRUE(j["strict_lower"].get<bool>());
  EXPECT_LE(j["bracket"]["upper"].get<double>(), 0.7072);
}

TEST_F(Cli, ReportsAreByteIdentical) {
  write("s.json", R"({"dims": [2, 2, 2], "re": [0.5, 0, 0, 0.5, 0, 0.5, 0.5, 0], "im": [0, 0, 0, 0, 0, 0, 0, 0]})");
  const CliRun a = run("proj-norm " + path("s.json") + " --seed 3 --restarts 8");
  const CliRun b = run("proj-norm " + path("s.json") + " --seed 3 --restarts 8");
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST_F(Cli, CsvOutput) {
  ASSERT_EQ(run("make-maximal --dims 2,4 -o " + path("m.json")).status, 0);
  ASSERT_EQ(run("is-maximal " + path("m.json") + " --csv " + path("out.csv")).status, 0);
  std::ifstream f(path("out.csv"));
  std::string header;
  std::getline(f, header);
  EXPECT_EQ(header, "quantity,lower,upper,notes");
  std::string line;
  int rows = 0;
  while (std::getline(f, line)) ++rows;
  EXPECT_EQ(rows, 5);
}

TEST_F(Cli, ClassifyEmbedsCertificate) {
  write("bell.json", R"({"kind": "density", "dims": [2, 2],
    "re": [0.5, 0, 0, 0.5, 0, 0, 0, 0, 0, 0, 0, 0, 0.5, 0, 0, 0.5], "im": [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]})");
  const CliRun r = run("classify " + path("bell.json"));
  ASSERT_EQ(r.status, 0);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["verdict"], "maximally-entangled");
  EXPECT_EQ(j["certificate"]["kind"], "witness");
  const CliRun e = run("entanglement " + path("bell.json"));
  EXPECT_NEAR(json::parse(e.out)["bracket"]["lower"].get<double>(), 2.0, 1e-9);
}

TEST_F(Cli, DivergenceTable) {
  const CliRun r = run("demo-divergence --k 3");
  ASSERT_EQ(r.status, 0);
  const json rows = json::parse(r.out)["table"]["rows"];
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_NEAR(rows[2]["cumulative_nuclear_norm"].get<double>(), 2.0 + 3.0 * std::sqrt(2.0), 1e-12);
}

TEST_F(Cli, ExitCodes) {
  write("bad.json", "{\"dims\": [2, 2], \"re\": [1, 0, 0 0]}");
  EXPECT_EQ(run("inj-norm " + path("bad.json")).status, 2);
  write("unnormalized.json", R"({"dims": [2, 2], "re": [1, 1, 0, 0], "im": [0, 0, 0, 0]})");
  EXPECT_EQ(run("inj-norm " + path("unnormalized.json")).status, 2);
  EXPECT_EQ(run("inj-norm " + path("missing.json")).status, 2);
  EXPECT_EQ(run("make-maximal --dims 4,2").status, 3);
  EXPECT_EQ(run("inner-radius --dims 2,x").status, 2);
  EXPECT_EQ(run("no-such-command").status, 2);
  write("ghz.json", R"({"dims": [2, 2, 2], "re": [0.70710678118654752, 0, 0, 0, 0, 0, 0, 0.70710678118654752], "im": [0, 0, 0, 0, 0, 0, 0, 0]})");
  EXPECT_EQ(run("is-maximal " + path("ghz.json") + " --restarts 4").status, 0);
  EXPECT_EQ(run("is-maximal " + path("ghz.json") + " --restarts 4 --strict").status, 4);
}

TEST_F(Cli, UnsupportedShapeMessageCitesCondition) {
  const std::string cmd = std::string(ENTGEOM_CLI) + " make-maximal --dims 3,2 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  ASSERT_NE(p, nullptr);
  std::array<char, 1024> buf{};
  std::string out;
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  pclose(p);
  EXPECT_NE(out.find("n_N >= n_1"), std::string::npos) << out;
}
