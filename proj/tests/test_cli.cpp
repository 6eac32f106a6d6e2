#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ipp/cli.hpp"
#include "ipp/io.hpp"

using namespace ipp;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = std::filesystem::temp_directory_path() /
          ("ipp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::create_directories(dir);
    unsetenv("IPP_SEED");
  }
  void TearDown() override { std::filesystem::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }
  std::filesystem::path dir;
};

}  // namespace

TEST_F(CliTest, SampleIsBitIdenticalOnRerun) {
  const auto a = path("a.ppc"), b = path("b.ppc");
  ASSERT_EQ(call({"sample", "--space", "torus2:10", "--process", "poisson:1", "--seed", "42", "--out", a}).code, 0);
  ASSERT_EQ(call({"sample", "--space", "torus2:10", "--process", "poisson:1", "--seed", "42", "--out", b}).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(slurp(a).rfind("PPC1 torus2:10 marked=0 n=", 0), 0u);
  EXPECT_NO_THROW(load_configuration(a));
}

TEST_F(CliTest, RenderWritesSvg) {
  const auto a = path("a.ppc"), svg = path("a.svg");
  ASSERT_EQ(call({"sample", "--space", "torus2:10", "--process", "poisson:1", "--out", a}).code, 0);
  ASSERT_EQ(call({"render", a, "--graph", "dist:2", "--out", svg}).code, 0);
  const std::string text = slurp(svg);
  EXPECT_NE(text.find("<line"), std::string::npos);
  EXPECT_NE(text.find("</svg>"), std::string::npos);
}

TEST_F(CliTest, VerifyMeckeAsserts) {
  const auto r = call({"verify", "mecke", "--t", "1", "--space", "torus2:20", "--replicas", "2000", "--seed", "7", "--assert"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("verifier,statistic,n,lhs,rhs,stderr,pvalue,seed"), std::string::npos);
}

TEST_F(CliTest, AcceptanceFailureExitsThree) {
  // Poisson(1) vs Poisson(1.2) expected to be equal in law: must fail
  const auto r = call({"fdd", "--space", "torus2:10", "--process-a", "poisson:1", "--process-b", "poisson:1.2",
                       "--windows", "box:0,1,0,1", "--replicas", "5000", "--assert"});
  EXPECT_EQ(r.code, 3);
  const auto ok = call({"fdd", "--space", "torus2:10", "--process-a", "poisson:1", "--process-b", "poisson:1.2",
                        "--windows", "box:0,1,0,1", "--replicas", "5000", "--expect", "different", "--assert"});
  EXPECT_EQ(ok.code, 0) << ok.err;
}

TEST_F(CliTest, PreconditionErrorsExitTwo) {
  EXPECT_EQ(call({"sample", "--space", "torus9:1", "--process", "poisson:1"}).code, 2);
  EXPECT_EQ(call({"sample", "--space", "torus2:10", "--process", "poisson:1", "--bogus"}).code, 2);
  EXPECT_EQ(call({"launch"}).code, 2);
  EXPECT_EQ(call({"render", path("missing.ppc"), "--out", path("x.svg")}).code, 2);
  EXPECT_EQ(call({"cost", "vertical", "--graph", "dist:0.5", "--replicas", "20"}).code, 2);
}

TEST_F(CliTest, CsvIsByteIdentical) {
  const auto a = path("a.csv"), b = path("b.csv");
  for (const auto& out : {a, b}) {
    ASSERT_EQ(call({"cost", "graphing", "--space", "torus2:10", "--process", "poisson:1", "--graph", "dist:1.5;knn:3",
                    "--replicas", "30", "--seed", "5", "--csv", out})
                  .code,
              0);
  }
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(slurp(a).rfind("graphing,eps,n,levels,replicas,mean_degree,stderr,intensity,cost,cost_stderr,connected_frac,seed", 0), 0u);
}

TEST_F(CliTest, ConfigFileAndOverrides) {
  const auto cfg = path("exp.cfg");
  {
    std::ofstream os(cfg);
    os << "# sampling experiment\nspace = torus2:10\nprocess = poisson:1\nseed = 42\n";
  }
  const auto a = path("a.ppc"), b = path("b.ppc"), c = path("c.ppc");
  ASSERT_EQ(call({"sample", "--config", cfg, "--out", a}).code, 0);
  ASSERT_EQ(call({"sample", "--space", "torus2:10", "--process", "poisson:1", "--seed", "42", "--out", b}).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  ASSERT_EQ(call({"sample", "--config", cfg, "--seed", "43", "--out", c}).code, 0);
  EXPECT_NE(slurp(a), slurp(c));
  {
    std::ofstream os(cfg, std::ios::app);
    os << "not a pair\n";
  }
  EXPECT_EQ(call({"sample", "--config", cfg, "--out", a}).code, 2);
}

TEST_F(CliTest, SeedFromEnvironment) {
  const auto a = path("a.ppc"), b = path("b.ppc");
  setenv("IPP_SEED", "42", 1);
  ASSERT_EQ(call({"sample", "--space", "torus2:10", "--process", "poisson:1", "--out", a}).code, 0);
  unsetenv("IPP_SEED");
  ASSERT_EQ(call({"sample", "--space", "torus2:10", "--process", "poisson:1", "--seed", "42", "--out", b}).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  setenv("IPP_SEED", "nope", 1);
  EXPECT_EQ(call({"sample", "--space", "torus2:10", "--process", "poisson:1", "--out", a}).code, 2);
  unsetenv("IPP_SEED");
}

TEST_F(CliTest, WobbleOutput) {
  const auto a = path("a.ppc");
  ASSERT_EQ(call({"sample", "--space", "torus2:10", "--process", "poisson:1", "--out", a}).code, 0);
  const auto r = call({"wobble", a, a, "--R", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("feasible,eps,R,n_a,n_b\n1,0,2,", 0), 0u) << r.out;
}

TEST_F(CliTest, VerifyColouringReportsUniformity) {
  const auto r = call({"verify", "colouring", "--space", "torus2:10", "--replicas", "300", "--seed", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("colouring,marginal_p,"), std::string::npos);
  EXPECT_NE(r.out.find("colouring,reproducible,1"), std::string::npos);
  EXPECT_EQ(call({"verify", "colouring", "--space", "torus2:10", "--colours", "1"}).code, 2);
}
