#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "diophant/serialize.hpp"

using namespace diophant;
using io::Json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / ("diophant_test_" + name);
  std::ofstream(path) << body;
  return path;
}

const PrimeTable& table() {
  static const PrimeTable t = sieve(100000);
  return t;
}

}  // namespace

TEST(CliCf, RationalTerminates) {
  const Outcome r = run({"cf", "--value", "22/7", "--terms", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["schema"], "diophant.convergents/1");
  EXPECT_EQ(j["quotients"], Json::array({3, 7}));
  EXPECT_TRUE(j["terminated"].get<bool>());
  ASSERT_EQ(j["convergents"].size(), 2u);
  EXPECT_EQ(j["convergents"][0]["numerator"], 3);
  EXPECT_EQ(j["convergents"][1]["numerator"], 22);
  EXPECT_EQ(j["convergents"][1]["denominator"], 7);
}

TEST(CliCf, SqrtTwoCsv) {
  const Outcome r = run({"cf", "--value", "sqrt:2", "--terms", "4", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "j,quotient,numerator,denominator,error_lo,error_hi,bounds");
  std::vector<std::string> fractions;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream cs(line);
    for (std::string c; std::getline(cs, c, ',');) cells.push_back(c);
    ASSERT_EQ(cells.size(), 7u);
    fractions.push_back(cells[2] + "/" + cells[3]);
    EXPECT_EQ(cells[6], "holds");
  }
  EXPECT_EQ(fractions, (std::vector<std::string>{"1/1", "3/2", "7/5", "17/12"}));
}

TEST(CliCf, OneIsASingleConvergent) {
  const Outcome r = run({"cf", "--value", "1/1", "--terms", "5"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(Json::parse(r.out)["convergents"].size(), 1u);
}

TEST(CliCf, Errors) {
  EXPECT_EQ(run({"cf", "--value", "foo"}).code, cli::kUsage);
  EXPECT_EQ(run({"cf"}).code, cli::kUsage);
  EXPECT_EQ(run({"cf", "--value", "2", "--bogus"}).code, cli::kUsage);
  EXPECT_EQ(run({"nonsense"}).code, cli::kUsage);
  const Outcome r = run({"cf", "--value", "pi", "--terms", "200", "--precision", "64"});
  EXPECT_EQ(r.code, cli::kPrecondition);
  EXPECT_NE(r.err.find("--precision"), std::string::npos);
}

TEST(CliDs, MeasureCsv) {
  const Outcome r = run({"ds", "measure", "--delta", "khinchin:1", "--qmax", "1000", "--reduced"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "q,delta,meas");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 999u);
}

TEST(CliDs, WindowReportLoadsBack) {
  const Outcome r = run({"ds", "window", "--delta", "uniform:2..100:10", "--from", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const WindowReport w = io::window_report_from_json(Json::parse(r.out));
  EXPECT_EQ(w.Q, 2u);
  EXPECT_EQ(w.R, 10u);
  EXPECT_EQ(w.sum_meas, Rational(1097, 1050));
}

TEST(CliDs, CounterexampleLevels) {
  const Outcome r = run({"ds", "counterexample", "--levels", "6"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  ASSERT_EQ(j["levels"].size(), 5u);
  for (const auto& level : j["levels"]) EXPECT_TRUE(level["identity_holds"].get<bool>());
}

TEST(CliDs, MonteCarloFieldsAndThreads) {
  const std::vector<std::string> base{"ds", "montecarlo", "--delta", "khinchin:2", "--qmax",
                                      "2000", "--samples", "500", "--seed", "11"};
  const Outcome one = run(base);
  ASSERT_EQ(one.code, 0) << one.err;
  const Json j = Json::parse(one.out);
  for (const char* key : {"seed", "samples", "mean", "expected", "stddev"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  auto threaded = base;
  threaded.insert(threaded.begin(), {"--threads", "3"});
  EXPECT_EQ(run(threaded).out, one.out);
  EXPECT_EQ(run(base).out, one.out);
}

TEST(CliDs, WindowIsThreadIndependent) {
  const std::vector<std::string> base{"ds", "window", "--delta", "khinchin:1", "--qmax", "600",
                                      "--from", "100", "--to", "600"};
  const Outcome one = run(base);
  ASSERT_EQ(one.code, 0) << one.err;
  auto threaded = base;
  threaded.insert(threaded.begin(), {"--threads", "4"});
  EXPECT_EQ(run(threaded).out, one.out);
}

TEST(CliDs, ErrorsCarryTheOffendingQ) {
  const Outcome r = run({"--json-errors", "ds", "measure", "--delta", "uniform:2..10:1"});
  EXPECT_EQ(r.code, cli::kPrecondition);
  const Json e = Json::parse(r.err);
  EXPECT_EQ(e["schema"], "diophant.error/1");
  EXPECT_EQ(e["exit_code"], 3);
  const auto path = temp_file("wide.json", R"({"qmax": 10, "values": [[3, "1", "5"], [4, "1", "100"]]})");
  const Outcome s = run({"ds", "pairs", "--delta", "file:" + path.string(), "--from", "2", "--to", "5"});
  EXPECT_EQ(s.code, cli::kPrecondition);
  EXPECT_NE(s.err.find("q = 3"), std::string::npos) << s.err;
  EXPECT_EQ(run({"ds", "measure", "--delta", "wobbly:3"}).code, cli::kUsage);
}

TEST(CliGcd, QualityAndCompress) {
  const auto g = temp_file("g.json", R"({"V": [77, 91], "W": [77, 91],
      "E": [[77, 77], [77, 91], [91, 77], [91, 91]]})");
  const Outcome q = run({"gcd", "quality", "--graph", g.string(), "--constants", "paper"});
  ASSERT_EQ(q.code, 0) << q.err;
  EXPECT_TRUE(Json::parse(q.out)["quality"].contains("value"));

  const Outcome c = run({"gcd", "compress", "--graph", g.string(), "--constants", "toy", "--t", "2"});
  ASSERT_EQ(c.code, 0) << c.err;
  const Json trace = Json::parse(c.out);
  EXPECT_FALSE(trace["steps"].empty());
  const auto graphs = io::trace_graphs_from_json(trace, table());
  EXPECT_TRUE(remaining_primes(graphs.back(), ConstantsProfile::toy()).empty());

  const auto profile = temp_file("toy.toml", format_profile(ConstantsProfile::toy()));
  const Outcome f = run({"gcd", "compress", "--graph", g.string(), "--constants", profile.string(), "--t", "2"});
  EXPECT_EQ(f.out, c.out);
}

TEST(CliGcd, ValidateListsViolations) {
  const auto ok = temp_file("ok.json", R"({"V": [2], "W": [3], "E": [[2, 3]]})");
  const Outcome good = run({"gcd", "validate", "--graph", ok.string()});
  EXPECT_EQ(good.code, 0) << good.err;
  const auto bad = temp_file("bad.json", R"({"V": [3], "W": [3], "E": [], "P": [2], "a": 2, "b": 1})");
  const Outcome r = run({"gcd", "validate", "--graph", bad.string()});
  EXPECT_NE(r.code, 0);
  EXPECT_NE((r.out + r.err).find("a|v fails at v=3"), std::string::npos);
}

TEST(CliGcd, SpecialCase) {
  const Outcome r = run({"gcd", "special-case", "--Q", "100", "--N", "10", "--constants", "toy", "--link"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["schema"], "diophant.special-case/1");
  EXPECT_EQ(j["ladder"].size(), 3u);
  EXPECT_TRUE(j.contains("link"));
  const Outcome bad = run({"gcd", "special-case", "--Q", "100", "--N", "10", "--S", "101"});
  EXPECT_EQ(bad.code, cli::kPrecondition);
}

TEST(CliOutput, WritesToFile) {
  const auto path = std::filesystem::temp_directory_path() / "diophant_test_out.json";
  std::filesystem::remove(path);
  const Outcome r = run({"-o", path.string(), "cf", "--value", "golden", "--terms", "6"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  const Json j = Json::parse(in);
  EXPECT_EQ(j["quotients"], Json::array({1, 1, 1, 1, 1, 1}));
}
