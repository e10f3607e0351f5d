#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gedge_cli/run.hpp"

using namespace gedge::cli;

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "gedge");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> data_rows(const std::string& text) {
  std::vector<std::string> rows;
  bool header = false;
  for (const auto& l : lines(text)) {
    if (l.empty() || l[0] == '#') continue;
    if (!header) {
      CHECK(l == "t,probability,std_error,method,seed");
      header = true;
      continue;
    }
    rows.push_back(l);
  }
  return rows;
}

}  // namespace

TEST_CASE("grid parsing") {
  const GridSpec g = parse_grid("-4:2:0.5");
  CHECK(g.lo == -4.0);
  CHECK(g.hi == 2.0);
  CHECK(g.step == 0.5);
  const GridSpec one = parse_grid("-2");
  CHECK(one.lo == -2.0);
  CHECK(one.hi == -2.0);
  CHECK_THROWS_AS(parse_grid("a:b:c"), ConfigError);
  CHECK_THROWS_AS(parse_grid("1:2"), ConfigError);
  CHECK_THROWS_AS(parse_grid("1x"), ConfigError);
}

TEST_CASE("cdf command writes 13 monotone rows") {
  const Result r = call({"cdf", "--t", "-4:2:0.5", "--nodes", "256", "--seed", "1"});
  REQUIRE(r.status == 0);
  const auto rows = data_rows(r.out);
  REQUIRE(rows.size() == 13);
  double prev = -1.0;
  for (const auto& row : rows) {
    const double p = std::stod(row.substr(row.find(',') + 1));
    CHECK(p > prev);
    prev = p;
    CHECK(row.find(",fredholm,1") != std::string::npos);
  }
  CHECK(r.out.find("# config: ") == 0);
  CHECK(r.out.find("\"nodes\":256") != std::string::npos);
}

TEST_CASE("mc command is byte-identical across runs") {
  const std::vector<std::string> args{"mc", "--t", "-2", "--paths", "100000", "--seed", "7"};
  const Result a = call(args);
  const Result b = call(args);
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);
  CHECK(data_rows(a.out).size() == 1);
  CHECK(a.out.find(",monte_carlo,7") != std::string::npos);
}

TEST_CASE("seed is echoed even when drawn from entropy") {
  const Result r = call({"cdf", "--t", "0"});
  REQUIRE(r.status == 0);
  CHECK(r.out.find("\"seed\":") != std::string::npos);
}

TEST_CASE("json output mirrors the csv fields") {
  const Result r = call({"cdf", "--t", "-1:1:1", "--format", "json", "--seed", "3"});
  REQUIRE(r.status == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["config"]["command"] == "cdf");
  CHECK(doc["config"]["seed"] == 3);
  REQUIRE(doc["records"].size() == 3);
  for (const auto& rec : doc["records"]) {
    CHECK(rec.size() == 5);
    CHECK(rec.contains("t"));
    CHECK(rec.contains("probability"));
    CHECK(rec.contains("std_error"));
    CHECK(rec["method"] == "fredholm");
    CHECK(rec["seed"] == 3);
  }
}

TEST_CASE("ginibre, abm and tails commands") {
  const Result g = call({"ginibre", "--n", "16", "--samples", "1000", "--t", "-2:2:1", "--seed", "4"});
  REQUIRE(g.status == 0);
  CHECK(data_rows(g.out).size() == 5);
  CHECK(g.out.find("ginibre_empirical") != std::string::npos);

  const Result a = call({"abm", "--runs", "1000", "--s", "0.25", "--t", "-1:1:1", "--seed", "5"});
  REQUIRE(a.status == 0);
  CHECK(data_rows(a.out).size() == 3);

  const Result t = call({"tails", "--format", "json", "--seed", "6"});
  REQUIRE(t.status == 0);
  const auto doc = nlohmann::json::parse(t.out);
  CHECK(std::abs(doc["summary"]["left_slope"].get<double>() + 0.5211) <= 0.02);
}

TEST_CASE("output file") {
  const std::string path = "gedge_cli_test_output.csv";
  const Result r = call({"cdf", "--t", "0", "--seed", "1", "-o", path});
  REQUIRE(r.status == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(data_rows(buf.str()).size() == 1);
  std::remove(path.c_str());
}

TEST_CASE("exit codes") {
  CHECK(call({}).status == 2);
  CHECK(call({"nope"}).status == 2);
  CHECK(call({"cdf", "--t", "2:1:0.5"}).status == 2);
  CHECK(call({"cdf", "--nodes", "0"}).status == 2);
  CHECK(call({"cdf", "--format", "xml"}).status == 2);
  CHECK(call({"mc", "--t", "3", "--paths", "10000"}).status == 2);
  CHECK(call({"cdf", "--t", "-20"}).status == 2);
  CHECK(call({"--help"}).status == 0);

  const Result numeric = call({"mc", "--t", "-50", "--paths", "10000", "--seed", "1"});
  CHECK(numeric.status == 0);
}
