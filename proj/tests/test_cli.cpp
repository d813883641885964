#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "coopsearch/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int status = -1;
  std::string output;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(COOPSEARCH_BIN) + " " + args + " 2>&1";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.output.append(buf, n);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string scenario(const std::string& name) { return std::string(SCENARIO_DIR) + "/" + name; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Fresh scratch directory per test.
fs::path scratch(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("coopsearch_cli_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const fs::path& dir, const std::string& name, const std::string& text) {
  std::ofstream(dir / name) << text;
  return dir / name;
}

std::map<std::string, std::string> files_in(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file()) out[e.path().filename().string()] = slurp(e.path());
  return out;
}

}  // namespace

TEST(Cli, VersionAndHelp) {
  const auto v = run("--version");
  EXPECT_EQ(v.status, 0);
  EXPECT_NE(v.output.find("0.1.0"), std::string::npos);
  EXPECT_EQ(run("--help").status, 0);
  EXPECT_EQ(run("no-such-command").status, 2);
}

TEST(Cli, OutOfRangeR2IsInvalidInput) {
  const auto dir = scratch("r2");
  const auto sc = write_file(dir, "bad.json",
                             "{\n  \"model\": \"one_d\",\n  \"one_d\": {\n    \"r2\": 1.5\n  }\n}\n");
  const auto r = run("field1d --scenario " + sc.string() + " --out " + dir.string());
  EXPECT_EQ(r.status, 2) << r.output;
  EXPECT_NE(r.output.find("bad.json:4:"), std::string::npos) << r.output;
}

TEST(Cli, UnknownKeyNamesFileAndLine) {
  const auto dir = scratch("unknown");
  const auto sc = write_file(dir, "typo.json",
                             "{\n  \"model\": \"two_d\",\n  \"two_d\": {\n    \"grid\": [7, 7],\n"
                             "    \"sigmaa\": 2.0\n  }\n}\n");
  const auto r = run("field2d --scenario " + sc.string() + " --out " + dir.string());
  EXPECT_EQ(r.status, 2) << r.output;
  EXPECT_NE(r.output.find("typo.json:5:"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("sigmaa"), std::string::npos) << r.output;
}

TEST(Cli, WrongSubcommandForModelIsInvalidInput) {
  const auto r = run("field1d --scenario " + scenario("field2d_reference.json") + " --out " +
                     scratch("wrongsub").string());
  EXPECT_EQ(r.status, 2) << r.output;
}

TEST(Cli, CriticalANoRootIsDomainExit) {
  const auto r = run("critical-a --r1 0.01 --r2 0.99");
  EXPECT_EQ(r.status, 3) << r.output;
  EXPECT_NE(r.output.find("undefined"), std::string::npos) << r.output;
}

TEST(Cli, CriticalABothDefined) {
  const auto r = run("critical-a --r1 0.665 --r2 0.6666666666666666");
  EXPECT_EQ(r.status, 0) << r.output;
  EXPECT_NE(r.output.find("difference"), std::string::npos) << r.output;
}

TEST(Cli, CriticalASwappedArgumentsGiveIdenticalOutput) {
  for (const char* pair : {"0.3 0.8", "0.9 0.6666666666666666", "0.65 0.6666666666666666"}) {
    std::istringstream in(pair);
    std::string x, y;
    in >> x >> y;
    const auto a = run("critical-a --r1 " + x + " --r2 " + y);
    const auto b = run("critical-a --r1 " + y + " --r2 " + x);
    EXPECT_EQ(a.status, b.status);
    EXPECT_EQ(a.output, b.output);
  }
}

TEST(Cli, CriticalARejectsPositionsOutsideTheUnitInterval) {
  EXPECT_EQ(run("critical-a --r1 1.2 --r2 0.5").status, 2);
  EXPECT_EQ(run("critical-a --r1 0.2 --r2 0.5 --quadrature 50").status, 2);
}

TEST(Cli, Field2dIsWorkerIndependent) {
  const auto d1 = scratch("f2_t1"), d4 = scratch("f2_t4");
  const std::string cmd = "field2d --scenario " + scenario("field2d_reference.json");
  ASSERT_EQ(run(cmd + " --threads 1 --out " + d1.string()).status, 0);
  ASSERT_EQ(run(cmd + " --threads 4 --out " + d4.string()).status, 0);
  const auto f1 = files_in(d1);
  EXPECT_EQ(f1.size(), 2u);
  EXPECT_EQ(f1, files_in(d4));
  const auto field = coopsearch::io::read_field_csv(f1.at("field_2d_a0.75.csv"));
  EXPECT_EQ(field.values.size(), 49u);
}

TEST(Cli, Field1dIsWorkerIndependent) {
  const auto dir = scratch("f1");
  const auto sc = write_file(dir, "small.json", R"({
  "model": "one_d",
  "one_d": {
    "r2": 0.66666666666666663,
    "priors": ["uniform", "gaussian"],
    "r1": {"from": 0.05, "to": 0.95, "count": 13},
    "a": {"from": 0.05, "to": 0.95, "count": 9},
    "quadrature": 501
  }
})");
  const auto d1 = dir / "t1", d4 = dir / "t4";
  ASSERT_EQ(run("field1d --scenario " + sc.string() + " --threads 1 --out " + d1.string()).status, 0);
  ASSERT_EQ(run("field1d --scenario " + sc.string() + " --threads 4 --out " + d4.string()).status, 0);
  const auto f1 = files_in(d1);
  EXPECT_EQ(f1.size(), 4u);
  EXPECT_EQ(f1, files_in(d4));
  EXPECT_NE(f1.at("critical_1d_uniform.csv").find("r1,a_c_closed,a_c_numeric"), std::string::npos);
}

TEST(Cli, SimulateBatchIsWorkerIndependent) {
  const auto dir = scratch("sim");
  const auto sc = write_file(dir, "batch.json", R"({
  "model": "simulate",
  "simulate": {"grid": [8, 8], "start2": [7, 7], "max_steps": 200, "modes": "both",
               "seeds": {"first": 3, "count": 6}, "traces": true}
})");
  const auto d1 = dir / "t1", d4 = dir / "t4";
  ASSERT_EQ(run("simulate --scenario " + sc.string() + " --threads 1 --out " + d1.string()).status, 0);
  ASSERT_EQ(run("simulate --scenario " + sc.string() + " --threads 4 --out " + d4.string()).status, 0);
  const auto f1 = files_in(d1);
  EXPECT_EQ(f1.size(), 13u);  // summary plus two traces per seed
  EXPECT_EQ(f1, files_in(d4));
  const auto summary = coopsearch::io::Json::parse(f1.at("summary.json"));
  EXPECT_EQ(summary["cooperative"]["runs"].get<int>(), 6);
}

TEST(Cli, SingleTraceEchoReproducesTheRun) {
  const auto dir = scratch("echo");
  ASSERT_EQ(run("simulate --scenario " + scenario("search_single.json") + " --out " +
                (dir / "first").string())
                .status,
            0);
  const auto first = slurp(dir / "first" / "trace_cooperative_seed7.json");
  ASSERT_FALSE(first.empty());
  // The embedded config is itself a scenario.
  const auto trace = coopsearch::io::Json::parse(first);
  const auto echo = write_file(dir, "echo.json", trace["config"].dump(2));
  ASSERT_EQ(run("simulate --scenario " + echo.string() + " --out " + (dir / "again").string()).status,
            0);
  EXPECT_EQ(slurp(dir / "again" / "trace_cooperative_seed7.json"), first);
}

TEST(Cli, SeedOverrideSelectsTheTrace) {
  const auto dir = scratch("seed");
  ASSERT_EQ(run("simulate --scenario " + scenario("search_single.json") + " --seed 11 --out " +
                dir.string())
                .status,
            0);
  EXPECT_TRUE(fs::exists(dir / "trace_cooperative_seed11.json"));
  EXPECT_TRUE(fs::exists(dir / "trace_independent_seed11.json"));
}

TEST(Cli, VerifyPasses) {
  const auto dir = scratch("verify");
  const auto r = run("verify --out " + dir.string());
  EXPECT_EQ(r.status, 0) << r.output;
  EXPECT_TRUE(fs::exists(dir / "verify.txt"));
}
