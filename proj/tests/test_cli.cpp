#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "fpp/cli.hpp"
#include "fpp/errors.hpp"
#include "fpp/io.hpp"

using namespace fpp;
using nlohmann::json;

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "fpp");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int status = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::filesystem::path scratch() {
  const auto dir = std::filesystem::temp_directory_path() / "fpp_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("bounds to a CSV file") {
  const auto path = scratch() / "b.csv";
  const auto r = invoke({"bounds", "--d", "100", "--a", "1.0", "--N", "4000", "--out", path.string()});
  REQUIRE(r.status == 0);
  const auto t = parse_csv(read_file(path));
  REQUIRE(t.rows.size() == 1);
  CHECK(t.number(0, "ratio1") > 1.0);
  CHECK(t.number(0, "ub1") > 0.0);
  CHECK(t.number(0, "N") == 4000);
  CHECK(r.out.find("bounds") != std::string::npos);
}

TEST_CASE("sample-eden twice gives identical files") {
  const auto a = scratch() / "e1.csv";
  const auto b = scratch() / "e2.csv";
  REQUIRE(invoke({"sample-eden", "--d", "5", "--a", "1.0", "--reps", "100", "--seed", "7", "--out", a.string()}).status == 0);
  REQUIRE(invoke({"sample-eden", "--d", "5", "--a", "1.0", "--reps", "100", "--seed", "7", "--out", b.string()}).status == 0);
  CHECK(read_file(a) == read_file(b));
}

TEST_CASE("an unknown flag is a config error and writes nothing") {
  const auto path = scratch() / "never.csv";
  std::filesystem::remove(path);
  const auto r = invoke({"bounds", "--d", "10", "--bogus", "1", "--out", path.string()});
  CHECK(r.status == 2);
  CHECK(json::parse(r.err)["error"] == "ConfigError");
  CHECK_FALSE(std::filesystem::exists(path));
}

TEST_CASE("bad values are config errors") {
  CHECK(invoke({"bounds", "--d", "x"}).status == 2);
  CHECK(invoke({"bounds"}).status == 2);
  CHECK(invoke({"sample-slab", "--d", "5", "--reps", "-3"}).status == 2);
  CHECK(invoke({"sample-slab", "--d", "5", "--mode", "weird"}).status == 2);
  CHECK(invoke({"sample-eden", "--d", "5", "--family", "uniform"}).status == 2);
  CHECK(invoke({"bounds", "--d", "10", "--format", "xml"}).status == 2);
}

TEST_CASE("module errors exit with status 1") {
  const auto r = invoke({"search-cross", "--d", "5", "--reps", "10"});
  CHECK(r.status == 1);
  CHECK(json::parse(r.err)["error"] == "DomainError");
}

TEST_CASE("help exits cleanly") { CHECK(invoke({"--help"}).status == 0); }

TEST_CASE("config files merge under flags") {
  const auto cfg = scratch() / "cfg.json";
  write_atomic(cfg, R"({"d": [3, 4], "a": 2.0, "N": 50})");
  const auto r = invoke({"bounds", "--config", cfg.string(), "--N", "60"});
  REQUIRE(r.status == 0);
  const auto t = parse_csv(r.out);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.number(0, "a") == 2.0);
  CHECK(t.number(1, "N") == 60);

  write_atomic(cfg, R"({"d": 3, "unexpected": 1})");
  CHECK(invoke({"bounds", "--config", cfg.string()}).status == 2);
  write_atomic(cfg, "{not json");
  CHECK(invoke({"bounds", "--config", cfg.string()}).status == 2);
}

TEST_CASE("JSON output mirrors the summary") {
  const auto r = invoke({"sample-slab", "--d", "4,5", "--reps", "20", "--format", "json"});
  REQUIRE(r.status == 0);
  const auto j = json::parse(r.out);
  CHECK(j["command"] == "sample-slab");
  REQUIRE(j["results"].size() == 2);
  for (const char* key : {"d", "n", "mean", "variance", "ci95Lo", "ci95Hi", "se", "normalizedMean", "normalizedVar"})
    CHECK(j["results"][0].contains(key));
}

TEST_CASE("raw mode emits one row per replicate") {
  const auto r = invoke({"sample-slab", "--d", "3", "--reps", "7", "--mode", "raw", "--seed", "1"});
  REQUIRE(r.status == 0);
  const auto t = parse_csv(r.out);
  CHECK(t.rows.size() == 7);
  CHECK(t.rows[0][t.column("exitVertex")].front() == '1');
}

TEST_CASE("every command runs on a small config") {
  const std::vector<std::vector<std::string>> cases = {
      {"concentration", "--d", "10", "--reps", "50"},
      {"subadd", "--d", "3", "--reps", "5", "--n", "2"},
      {"search-cross", "--d", "20", "--reps", "50"},
      {"ui-tail", "--d", "10", "--reps", "50", "--M", "2"},
      {"couple-check", "--family", "uniform", "--grid", "10"},
      {"sample-slab", "--d", "3", "--family", "table", "--points", "[[0,0],[1,1]]", "--reps", "20"},
  };
  for (const auto& c : cases) {
    const auto r = invoke(c);
    CHECK_MESSAGE(r.status == 0, c[0] << ": " << r.err);
    CHECK_NOTHROW(parse_csv(r.out));
  }
}

TEST_CASE("couple_check") {
  SUBCASE("exponential target is the identity") {
    const auto rep = couple_check(WeightModel{Exponential{3.0}, 0}, 50);
    CHECK(rep.sup_deviation == 0.0);
    CHECK(rep.monotonicity_violations == 0);
  }
  SUBCASE("uniform target") {
    const auto rep = couple_check(WeightModel{UniformDensity{1.0}, 0}, 50);
    for (const auto& row : rep.rows) {
      CHECK(row.ratio == doctest::Approx(-std::expm1(-row.t) / row.t).epsilon(1e-14));
      CHECK(row.ratio > 0.0);
      CHECK(row.ratio < 1.0);
    }
    CHECK(rep.rows.front().ratio == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(rep.monotonicity_violations == 0);
  }
  SUBCASE("table target") {
    const auto rep = couple_check(WeightModel{QuantileTable({{0.0, 0.0}, {0.5, 0.25}, {1.0, 2.0}}), 0}, 50);
    CHECK(rep.rate == doctest::Approx(2.0));
    CHECK(rep.monotonicity_violations == 0);
  }
  CHECK_THROWS_AS(couple_check(WeightModel{QuantileTable({{0.0, 0.0}, {0.3, 0.0}, {1.0, 1.0}}), 0}, 10),
                  UnsupportedModel);
}

TEST_CASE("thread count does not change output") {
  const auto one = invoke({"sample-eden", "--d", "8", "--reps", "200", "--threads", "1"});
  const auto four = invoke({"sample-eden", "--d", "8", "--reps", "200", "--threads", "4"});
  CHECK(one.out == four.out);
}
