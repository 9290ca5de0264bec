#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cli/cli.hpp"

namespace tamura::cli {
namespace {

using json = nlohmann::json;

struct Result {
  int code;
  std::string out;
  std::string err;
  json doc() const { return json::parse(out); }
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

TEST(CliCz, OneAndAHalfTurns) {
  const Result r = run_cli({"cz", "--freqs", "1", "--duration", "9.42477796"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_EQ(r.doc(), json::parse(R"({"agree": true, "analytic": 3, "numeric": 3})"));
}

TEST(CliCz, TwoHalfTurns) {
  const Result r = run_cli({"cz", "--freqs", "1,1", "--duration", "3.14159265"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_EQ(r.doc()["analytic"], 2);
  EXPECT_EQ(r.doc()["numeric"], 2);
}

TEST(CliCz, SingleEngine) {
  const Result r = run_cli({"cz", "--freqs", "2", "--duration", "1", "--analytic"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_EQ(r.doc(), json::parse(R"({"analytic": 1})"));
  EXPECT_EQ(run_cli({"cz", "--freqs", "1", "--duration", "1", "--analytic", "--numeric"}).code, kUsage);
}

TEST(CliCz, NearIntegerRotationIsInconclusive) {
  // T alpha / 2 pi = 1 + 1e-6 sits inside the ambiguous band.
  const Result r = run_cli({"cz", "--freqs", "1", "--duration", "6.283191590", "--numeric"});
  EXPECT_EQ(r.code, kNumericInconclusive);
  EXPECT_TRUE(r.doc()["numeric"].is_null());
  EXPECT_TRUE(r.doc().contains("error"));
}

TEST(CliCz, UsageErrors) {
  EXPECT_EQ(run_cli({"cz", "--freqs", "1", "--duration", "-1"}).code, kUsage);
  EXPECT_EQ(run_cli({"cz", "--freqs", "0", "--duration", "1"}).code, kUsage);
  EXPECT_EQ(run_cli({"cz", "--duration", "1"}).code, kUsage);
  EXPECT_EQ(run_cli({"cz", "--freqs", "x", "--duration", "1"}).code, kUsage);
  EXPECT_EQ(run_cli({"cz", "--freqs", "1", "--duration", "1", "--format", "csv"}).code, kUsage);
  EXPECT_EQ(run_cli({}).code, kUsage);
  EXPECT_EQ(run_cli({"bogus"}).code, kUsage);
}

TEST(CliSpectrum, Golden) {
  const Result r = run_cli({"spectrum", "--d", "2", "--weights", "1;sqrt(2)", "--max-degree", "7"});
  EXPECT_EQ(r.code, kOk);
  const char* golden = R"json({
    "d": 2, "max_degree": 7, "weights": ["1", "sqrt(2)"],
    "orbits": [
      {"j": 1, "n": 1, "cz": 3, "period_coeff": "1"},
      {"j": 2, "n": 1, "cz": 5, "period_coeff": "sqrt(2)"},
      {"j": 1, "n": 2, "cz": 7, "period_coeff": "2"}]})json";
  EXPECT_EQ(r.doc(), json::parse(golden));
}

TEST(CliSpectrum, CrossCheck) {
  const Result r = run_cli({"spectrum", "--d", "2", "--weights", "1;sqrt(2)", "--max-degree", "7", "--cross-check"});
  EXPECT_EQ(r.code, kOk);
  for (const auto& o : r.doc()["orbits"]) {
    EXPECT_EQ(o["cross_check"], "agree");
    EXPECT_EQ(o["numeric"], o["cz"]);
  }
}

TEST(CliSpectrum, SingleWeightCsv) {
  const Result r = run_cli({"spectrum", "--d", "5", "--weights", "1", "--max-degree", "4", "--format", "csv"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_EQ(r.out, "j,n,cz,period_coeff\n1,1,2,1\n1,2,4,2\n");
}

TEST(CliSpectrum, HypothesisViolation) {
  const Result r = run_cli({"spectrum", "--d", "2", "--weights", "1;2"});
  EXPECT_EQ(r.code, kHypothesis);
  EXPECT_EQ(r.doc()["pair"], json::parse("[1, 2]"));
  EXPECT_EQ(r.doc()["ratio"], "1/2");
}

TEST(CliSpectrum, ParseErrorsAreUsage) {
  EXPECT_EQ(run_cli({"spectrum", "--d", "2", "--weights", "1;sqrt(3)"}).code, kUsage);
  EXPECT_EQ(run_cli({"spectrum", "--d", "4", "--weights", "1"}).code, kUsage);
  EXPECT_EQ(run_cli({"spectrum", "--d", "2", "--weights", "1;-1"}).code, kUsage);
}

TEST(CliPartition, Tamura) {
  const Result r = run_cli({"partition", "--d", "2", "--weights", "1;sqrt(2)", "--limit", "100000"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_EQ(r.doc(), json::parse(R"({"verdict": "partition", "mode": "tamura", "limit": 100000})"));
}

TEST(CliPartition, Owners) {
  const Result r = run_cli({"partition", "--d", "2", "--weights", "1;sqrt(2)", "--limit", "9", "--owners"});
  EXPECT_EQ(r.doc()["sets"], json::parse("[[1,3,5,6,8],[2,4,7,9]]"));
}

TEST(CliPartition, BeattyPair) {
  const Result r = run_cli(
      {"partition", "--d", "5", "--weights", "1/2+1/2*sqrt(5)", "--mode", "beatty-pair", "--limit", "1000"});
  EXPECT_EQ(r.code, kOk);
  const json d = r.doc();
  EXPECT_EQ(d["verdict"], "partition");
  EXPECT_EQ(d["beta"], "3/2 + 1/2*sqrt(5)");
  EXPECT_EQ(d["reciprocal_sum_is_one"], true);
}

TEST(CliPartition, Uspensky) {
  const Result r =
      run_cli({"partition", "--d", "2", "--weights", "1;sqrt(2);5", "--mode", "uspensky", "--limit", "1000"});
  EXPECT_EQ(r.code, kViolation);
  const json d = r.doc();
  EXPECT_NE(d["verdict"], "no_witness");
  EXPECT_TRUE(d["witness"]["value"].is_number_integer());
}

TEST(CliPartition, Errors) {
  EXPECT_EQ(run_cli({"partition", "--d", "2", "--weights", "1;2", "--limit", "10"}).code, kHypothesis);
  EXPECT_EQ(run_cli({"partition", "--d", "2", "--weights", "3/2", "--mode", "beatty-pair", "--limit", "10"}).code,
            kHypothesis);
  EXPECT_EQ(run_cli({"partition", "--d", "2", "--weights", "1;sqrt(2)"}).code, kUsage);
  EXPECT_EQ(run_cli({"partition", "--d", "2", "--weights", "1;sqrt(2)", "--limit", "0"}).code, kUsage);
  EXPECT_EQ(run_cli({"partition", "--d", "2", "--weights", "1;sqrt(2)", "--limit", "5", "--mode", "x"}).code,
            kUsage);
}

TEST(CliSh, Equal) {
  for (auto [w, k] : {std::pair{"1;sqrt(2)", "201"}, std::pair{"1;sqrt(2);1+sqrt(2)", "202"}}) {
    const Result r = run_cli({"sh", "--d", "2", "--weights", w, "--max-degree", k});
    EXPECT_EQ(r.code, kOk);
    EXPECT_EQ(r.doc()["verdict"], "equal");
  }
}

TEST(CliSh, MissingWeightsIsUsage) { EXPECT_EQ(run_cli({"sh", "--d", "2", "--max-degree", "10"}).code, kUsage); }

TEST(CliSh, Csv) {
  const Result r = run_cli({"sh", "--d", "2", "--weights", "1;sqrt(2)", "--max-degree", "4", "--format", "csv"});
  EXPECT_EQ(r.out, "degree,gutt,formula\n0,0,0\n1,0,0\n2,0,0\n3,1,1\n4,0,0\n");
}

TEST(CliDeterminism, IdenticalFlagsIdenticalBytes) {
  const std::vector<std::string> args{"spectrum", "--d", "5", "--weights", "1;1/2+1/2*sqrt(5)", "--max-degree",
                                      "60"};
  EXPECT_EQ(run_cli(args).out, run_cli(args).out);
}

}  // namespace
}  // namespace tamura::cli
