#include "suites.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

using namespace dybe::cli;

namespace {

SuiteConfig config(const std::string& suite, dybe::verify::Params params = {}) {
  SuiteConfig c;
  c.suite = suite;
  c.params = std::move(params);
  return c;
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(DYBE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("dybe_cli_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST(Catalogue, ListsAtLeastFourteenSuitesWithIdentityNames) {
  const auto& c = catalogue();
  EXPECT_GE(c.size(), 14u);
  ASSERT_NE(find_suite("qdybe"), nullptr);
  EXPECT_NE(find_suite("qdybe")->description.find("Yang-Baxter"), std::string::npos);
  ASSERT_NE(find_suite("abrr"), nullptr);
  EXPECT_NE(find_suite("abrr")->description.find("ABRR"), std::string::npos);
  for (const auto& s : c) {
    EXPECT_FALSE(s.description.empty()) << s.name;
    EXPECT_EQ(s.description.find('\n'), std::string::npos) << s.name;
  }
}

TEST(RunSuite, RationalQdybePasses) {
  auto res = run_suite(config("qdybe", {{"family", "rational"}, {"n", "2"}}));
  EXPECT_TRUE(res.report.pass);
  EXPECT_EQ(res.exit_code, 0);
  EXPECT_EQ(res.report.samples, 25);
}

TEST(RunSuite, EigenOnL2L1Passes) {
  auto res = run_suite(config("eigen", {{"V", "2"}, {"W", "1"}, {"q", "1/2"}, {"order", "10"}}));
  EXPECT_EQ(res.backend, "exact");
  EXPECT_TRUE(res.report.pass);
  EXPECT_EQ(res.report.residual_max, 0.0);
}

TEST(RunSuite, ConfigurationErrors) {
  EXPECT_THROW(run_suite(config("no-such-suite")), ConfigError);
  EXPECT_THROW(run_suite(config("qdybe", {{"family", "bogus"}})), ConfigError);
  EXPECT_THROW(run_suite(config("qdybe", {{"n", "two"}})), ConfigError);
  EXPECT_THROW(run_suite(config("eigen", {{"unused", "1"}})), ConfigError);
  EXPECT_THROW(run_suite(config("eigen", {{"V", "3"}})), ConfigError);
  auto c = config("symmetry");
  c.backend = "exact";
  EXPECT_THROW(run_suite(c), ConfigError);
  EXPECT_THROW(run_suite(config("gauge", {{"plan", "{\"family\": \"rational\", \"colour\": 1}"}})), ConfigError);
  EXPECT_THROW(run_suite(config("gauge", {{"plan", "{not json"}})), ConfigError);
}

TEST(RunSuite, ReportEchoesResolvedDefaults) {
  auto res = run_suite(config("qdybe", {{"family", "trig"}}));
  auto j = to_json(res);
  EXPECT_EQ(j["params"]["family"], "trig");
  EXPECT_EQ(j["params"]["n"], "2");
  EXPECT_EQ(j["params"]["q"], "0.5");
}

TEST(Json, SchemaKeysInOrder) {
  auto j = to_json(run_suite(config("commute")));
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  std::vector<std::string> expected{"suite", "params", "samples", "seed", "residual_max", "residual_mean",
                                    "tol", "pass", "backend", "version"};
  EXPECT_EQ(keys, expected);
  EXPECT_FALSE(j.contains("meta"));
}

TEST(Json, IdenticalConfigGivesIdenticalReport) {
  for (const char* s : {"qdybe", "cdybe", "symmetry", "gauge"}) {
    dybe::verify::Params p;
    if (std::string(s) == "gauge") p = {{"plan", "{\"family\":\"trig\",\"n\":3,\"shift\":[0.1,0.2,0.3]}"}};
    auto a = to_json(run_suite(config(s, p))).dump();
    auto b = to_json(run_suite(config(s, p))).dump();
    EXPECT_EQ(a, b) << s;
  }
}

TEST(Json, TimestampGoesToSeparateMetaObject) {
  auto c = config("commute");
  auto plain = to_json(run_suite(c));
  c.timestamp = true;
  auto stamped = to_json(run_suite(c));
  ASSERT_TRUE(stamped.contains("meta"));
  stamped.erase("meta");
  EXPECT_EQ(plain.dump(), stamped.dump());
}

TEST(Binary, ExitCodes) {
  EXPECT_EQ(run_cli("verify --check qdybe --family rational --n 2"), 0);
  EXPECT_EQ(run_cli("gauge --plan '{\"family\":\"rational\",\"n\":3,\"form\":\"cyclic\"}'"), 1);
  EXPECT_EQ(run_cli("run no-such-suite"), 2);
  EXPECT_EQ(run_cli("verify --check qdybe --family bogus"), 2);
  EXPECT_EQ(run_cli("--no-such-flag"), 2);
  EXPECT_EQ(run_cli("fusion --modules 1,1 --check abrr --lambda -1 --q classical"), 2);
  EXPECT_EQ(run_cli("list"), 0);
  EXPECT_EQ(run_cli("--list-suites"), 0);
}

TEST(Binary, RepeatedRunsWriteIdenticalJson) {
  auto a = temp_file("a.json"), b = temp_file("b.json");
  ASSERT_EQ(run_cli("--seed 7 --samples 10 --json " + a.string() + " verify --check qdybe-spectral --family elliptic"), 0);
  ASSERT_EQ(run_cli("--seed 7 --samples 10 --json " + b.string() + " verify --check qdybe-spectral --family elliptic"), 0);
  auto ta = slurp(a);
  EXPECT_FALSE(ta.empty());
  EXPECT_EQ(ta, slurp(b));
  auto j = json::parse(ta);
  EXPECT_EQ(j["seed"], 7);
  EXPECT_EQ(j["samples"], 10);
  ASSERT_EQ(run_cli("--seed 8 --samples 10 --json " + b.string() + " verify --check qdybe-spectral --family elliptic"), 0);
  EXPECT_NE(ta, slurp(b));
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST(Binary, SubcommandFlagsMapToSuites) {
  auto a = temp_file("fusion.json");
  ASSERT_EQ(run_cli("--json " + a.string() + " fusion --modules 1,1,2 --q 1/2 --lambda 3/7 --check twist"), 0);
  auto j = json::parse(slurp(a));
  EXPECT_EQ(j["suite"], "twist");
  EXPECT_EQ(j["params"]["modules"], "1,1,2");
  EXPECT_EQ(j["residual_max"], 0.0);
  ASSERT_EQ(run_cli("--json " + a.string() + " trace --V 2 --W 1 --q 1/2 --order 10 --check eigen"), 0);
  j = json::parse(slurp(a));
  EXPECT_EQ(j["suite"], "eigen");
  EXPECT_EQ(j["backend"], "exact");
  std::filesystem::remove(a);
}
