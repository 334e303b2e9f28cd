#include <gtest/gtest.h>

#include <sstream>

#include "cli.hpp"

using namespace bvk;
using namespace bvk::cli;

namespace {

struct CliRun {
  int code;
  std::string out, err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "bvk");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Parse, Rationals) {
  EXPECT_EQ(parse_rational("1/500"), mpq_class(1, 500));
  EXPECT_EQ(parse_rational("0.002"), mpq_class(1, 500));
  EXPECT_EQ(parse_rational("2e-3"), mpq_class(1, 500));
  EXPECT_EQ(parse_rational("7500"), mpq_class(7500));
  EXPECT_EQ(parse_rational("1.5e3"), mpq_class(1500));
  EXPECT_EQ(parse_rational("-0.25"), mpq_class(-1, 4));
  EXPECT_THROW(parse_rational(""), UsageError);
  EXPECT_THROW(parse_rational("abc"), UsageError);
  EXPECT_THROW(parse_rational("1e"), UsageError);
  EXPECT_EQ(parse_count("3e3"), 3000u);
  EXPECT_THROW(parse_count("2.5"), UsageError);
  EXPECT_THROW(parse_count("-3"), UsageError);
}

TEST(Cli, UsageErrorsExit64) {
  EXPECT_EQ(run({}).code, kUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kUsage);
  EXPECT_EQ(run({"kappa", "--eps", "0.6"}).code, kUsage);
  EXPECT_EQ(run({"kappa", "--T0", "100", "--T", "50"}).code, kUsage);
  EXPECT_EQ(run({"kappa", "--c2-cutoff", "1000"}).code, kUsage);
  EXPECT_EQ(run({"kappa", "--format", "csv"}).code, kUsage);
  EXPECT_EQ(run({"verify", "nothing"}).code, kUsage);
  EXPECT_EQ(run({"verify", "c2", "--cutoff", "1000"}).code, kUsage);
  EXPECT_EQ(run({"sieve"}).code, kUsage);
  EXPECT_EQ(run({"sieve", "--d2", "10", "--h", "poly:1,1"}).code, kUsage);
  EXPECT_EQ(run({"sieve", "--d1", "20", "--d2", "10"}).code, kUsage);
  CliRun r = run({"--format", "xml", "sieve", "--d2", "10"});
  EXPECT_EQ(r.code, kUsage);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, HelpExitsZero) {
  CliRun r = run({"--help"});
  EXPECT_EQ(r.code, kPass);
  EXPECT_NE(r.out.find("kappa"), std::string::npos);
}

TEST(Cli, ResourceLimitsExit2) {
  EXPECT_EQ(run({"sieve", "--d2", "200000"}).code, kResource);
  EXPECT_EQ(run({"sieve", "--d2", "10", "--N", "2e9"}).code, kResource);
}

TEST(Cli, SieveCsv) {
  CliRun r = run({"sieve", "--d2", "3"});
  ASSERT_EQ(r.code, kPass);
  std::istringstream in(r.out);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, "D1,D2,M,prediction_main,prediction_second,residual_times_L2");
  EXPECT_EQ(row.rfind("1,3,0.69903617697087", 0), 0u) << row;
}

TEST(Cli, SieveGridAndN) {
  CliRun r = run({"sieve", "--d2-grid", "10,20,30", "--N", "1000"});
  ASSERT_EQ(r.code, kPass);
  std::istringstream in(r.out);
  std::string line;
  int rows = -1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 3);
  EXPECT_NE(r.out.find(",N,S"), std::string::npos);
}

TEST(Cli, SieveOutputIndependentOfThreads) {
  CliRun a = run({"--threads", "1", "sieve", "--d2-grid", "500,2000", "--N", "100000"});
  CliRun b = run({"--threads", "4", "sieve", "--d2-grid", "500,2000", "--N", "100000"});
  ASSERT_EQ(a.code, kPass);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, PolyIdentityMatchesH0) {
  CliRun a = run({"sieve", "--d2", "700", "--h", "poly:0,1"});
  CliRun b = run({"sieve", "--d2", "700"});
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, NonH0LeavesSecondOrderEmpty) {
  CliRun r = run({"--format", "json", "sieve", "--d2", "100", "--h", "poly:0,2,-1"});
  ASSERT_EQ(r.code, kPass);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["rows"][0]["prediction_second"].is_null());
  EXPECT_NEAR(j["rows"][0]["prediction_main"].get<double>(), 4.0 / 3.0 / std::log(100.0), 1e-15);
}

TEST(Cli, VerifyC2Json) {
  CliRun r = run({"--format", "json", "verify", "c2"});
  ASSERT_EQ(r.code, kPass) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["which"], "c2");
  EXPECT_TRUE(j["pass"].get<bool>());
  Ball c2 = Ball::from_string(j["c2"]["mid"].get<std::string>(), std::stod(j["c2"]["rad"].get<std::string>()));
  EXPECT_TRUE(c2.contains("1.3856045"));
}

TEST(Cli, HTableCsv) {
  CliRun r = run({"--format", "csv", "verify", "h-table", "--cutoffs", "250,3000"});
  EXPECT_EQ(r.code, kPass) << r.out;
  EXPECT_EQ(r.out.rfind("C,D,delta,rho,err\n250,20.1940046452", 0), 0u) << r.out;
}

TEST(Cli, KappaShortRunJson) {
  CliRun r = run({"--format", "json", "kappa", "--eps", "1/50", "--T0", "20", "--T", "25", "--width", "1"});
  ASSERT_EQ(r.code, kPass) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["complete"].get<bool>());
  EXPECT_EQ(j["segments"].size(), 3u);
  EXPECT_EQ(j["plan"]["eps"], "1/50");
  EXPECT_FALSE(j.contains("runtime"));
  EXPECT_NE(r.err.find("kappa run took"), std::string::npos);
}
