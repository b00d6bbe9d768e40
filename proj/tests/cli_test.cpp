#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include <gtest/gtest.h>

namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Run run(const std::string& args) {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() / ("qmirror_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const fs::path out = dir / ("out" + std::to_string(counter));
  const fs::path err = dir / ("err" + std::to_string(counter++));
  const std::string cmd = std::string(QMIRROR_CLI) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

std::string config(const std::string& name) { return std::string(QMIRROR_CONFIG_DIR) + "/" + name; }

fs::path scratch(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / (std::to_string(::getpid()) + "_" + name);
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

TEST(Cli, ClassifyIsByteIdentical) {
  for (const char* name : {"actual_mirror.json", "dirac_limit.json"}) {
    const auto a = run("classify --config " + config(name));
    const auto b = run("classify --config " + config(name));
    EXPECT_EQ(a.code, 0) << a.err;
    EXPECT_FALSE(a.out.empty());
    EXPECT_EQ(a.out, b.out);
  }
}

TEST(Cli, SweepIsByteIdenticalAcrossThreadCounts) {
  const auto a = run("sweep --config " + config("kappa_sweep.json") + " --threads 1");
  const auto b = run("sweep --config " + config("kappa_sweep.json") + " --threads 8");
  EXPECT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 102);
}

TEST(Cli, MalformedConfigExitsOne) {
  const auto path = scratch("broken.json", "{\"schema\": 1, ");
  const auto r = run("classify --config " + path.string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("malformed JSON"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, MissingFileExitsOne) {
  EXPECT_EQ(run("classify --config /nonexistent/scenario.json").code, 1);
}

TEST(Cli, UsageErrorExitsOne) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("recoil --k 1").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
}

TEST(Cli, DomainErrorExitsTwo) {
  const auto r = run("recoil --k 1 --p 10 --mass 1");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("no reflected solution"), std::string::npos);
  EXPECT_EQ(run("overlap --dp -1 --delta-p 1").code, 2);
}

TEST(Cli, RecoilAndOverlap) {
  const auto r = run("recoil --k 1 --mass 1000");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"k_prime\": -0.998"), std::string::npos) << r.out;
  const auto o = run("overlap --dp 1 --delta-p 2 --grid 4097");
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("\"magnitude\": 0.6065306597126"), std::string::npos) << o.out;
}

TEST(Cli, SchmidtWorkedExample) {
  const auto closed = run("schmidt --w1 0.5 --r 0.6");
  const auto numeric = run("schmidt --w1 0.5 --r 0.6 --numeric");
  EXPECT_EQ(closed.code, 0);
  EXPECT_EQ(numeric.code, 0);
  EXPECT_NE(closed.out.find("\"wbar\""), std::string::npos);
}

TEST(Cli, UnitsEstimates) {
  const auto r = run("units --estimates");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"thermal_case_300K\": \"CaseI_NoBreakdown\""), std::string::npos) << r.out;
  EXPECT_EQ(run("units").code, 1);
}

TEST(Cli, SweepThenPlot) {
  const fs::path csv = fs::temp_directory_path() / (std::to_string(::getpid()) + "_sweep.csv");
  const fs::path svg = fs::temp_directory_path() / (std::to_string(::getpid()) + "_sweep.svg");
  ASSERT_EQ(run("sweep --config " + config("kappa_sweep.json") + " --out " + csv.string()).code, 0);
  ASSERT_EQ(run("plot --csv " + csv.string() + " --out " + svg.string()).code, 0);
  const std::string first = slurp(svg);
  ASSERT_EQ(run("plot --csv " + csv.string() + " --out " + svg.string()).code, 0);
  EXPECT_EQ(first, slurp(svg));
  EXPECT_NE(first.find("<polyline"), std::string::npos);

  const auto header_only = scratch("header.csv", "kappa,r,visibility,purity,case,fuzziness\n");
  const auto r = run("plot --csv " + header_only.string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("no data rows"), std::string::npos);
}

}  // namespace
