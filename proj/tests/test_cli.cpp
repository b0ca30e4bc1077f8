#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "finsler/catalog.hpp"
#include "finsler/cli.hpp"
#include "finsler/report.hpp"
#include "finsler/verify.hpp"

using namespace finsler;

namespace {

std::vector<std::string> sv(std::initializer_list<const char*> v) {
  return std::vector<std::string>(v.begin(), v.end());
}

}  // namespace

TEST_CASE("catalog grammar round trips the builtin document") {
  Catalog cat = builtin_catalog();
  CHECK(cat.metrics.size() == 7);
  CHECK(cat.changes.size() == 8);
  CHECK(cat.samples == 20);
  CHECK(cat.seed == 7);
  CHECK(cat.find_metric("euclid2") != nullptr);
  CHECK(cat.find_metric("quartic5") != nullptr);
  CHECK(cat.find_change("energy23") != nullptr);
  CHECK(cat.find_metric("nope") == nullptr);

  CatalogCheckResult res = check_catalog(cat);
  CHECK(res.ok);
}

TEST_CASE("catalog parse errors carry offsets") {
  CHECK_THROWS_AS(parse_catalog("metric m { kind bogus dim 2 }"), config_error);
  CHECK_THROWS_AS(parse_catalog("metric m { dim }"), parse_error);
  CHECK_THROWS_AS(parse_catalog("blob x {}"), parse_error);
  CHECK_THROWS_AS(
      parse_catalog("metric m { kind euclidean dim 2 } metric m { kind euclidean dim 2 }"),
      config_error);
  CHECK_THROWS_AS(parse_catalog("metric m { source \"unterminated }"), parse_error);

  // homogeneity failure detected at load-check time
  Catalog bad = parse_catalog(
      "metric odd { kind expression dim 2 source \"y1^2 + y2\" }");
  CHECK_FALSE(check_catalog(bad).ok);
}

TEST_CASE("verify subcommand: exit codes and determinism") {
  CHECK(run_cli(sv({"verify", "--metric", "euclid2", "--change", "randers",
                    "--samples", "6", "--seed", "7", "--json",
                    "/tmp/finsler_rep1.json"})) == 0);
  CHECK(run_cli(sv({"verify", "--metric", "euclid2", "--change", "bogus"})) == 2);
  CHECK(run_cli(sv({"verify", "--metric", "bogus"})) == 2);
  CHECK(run_cli(sv({"nonsense"})) == 2);

  // byte-identical reports for identical seeds
  CHECK(run_cli(sv({"verify", "--metric", "euclid2", "--change", "randers",
                    "--samples", "6", "--seed", "7", "--json",
                    "/tmp/finsler_rep2.json"})) == 0);
  std::ifstream f1("/tmp/finsler_rep1.json", std::ios::binary);
  std::ifstream f2("/tmp/finsler_rep2.json", std::ios::binary);
  std::string s1((std::istreambuf_iterator<char>(f1)),
                 std::istreambuf_iterator<char>());
  std::string s2((std::istreambuf_iterator<char>(f2)),
                 std::istreambuf_iterator<char>());
  CHECK(!s1.empty());
  CHECK(s1 == s2);
}

TEST_CASE("geodesic subcommand usage errors") {
  CHECK(run_cli(sv({"geodesic", "--metric", "riem2", "--change", "randers-grad",
                    "--steps", "0"})) == 2);
  CHECK(run_cli(sv({"geodesic", "--metric", "riem2", "--change", "randers-grad",
                    "--x0", "0.1", "--y0", "1,0", "--steps", "50"})) == 2);
}

TEST_CASE("catalog check subcommand") {
  CHECK(run_cli(sv({"catalog", "check"})) == 0);
  CHECK(run_cli(sv({"catalog", "check", "--catalog", "/nonexistent.cat"})) == 2);
}

TEST_CASE("environment variable overrides the default tolerance") {
  setenv("FINSLERLAB_TOL", "1e-30", 1);
  // an impossibly tight tolerance fails every block
  CHECK(run_cli(sv({"verify", "--metric", "euclid2", "--change", "randers",
                    "--samples", "4"})) == 1);
  // the explicit flag wins over the environment
  CHECK(run_cli(sv({"verify", "--metric", "euclid2", "--change", "randers",
                    "--samples", "4", "--tol", "1e-3"})) == 0);
  unsetenv("FINSLERLAB_TOL");
  CHECK(run_cli(sv({"verify", "--metric", "euclid2", "--change", "randers",
                    "--samples", "4"})) == 0);
}

TEST_CASE("deterministic JSON writer formatting") {
  Json j;
  j["a"] = 1.0 / 3.0;
  j["b"] = Json::array({1, 2.5, true, "x\"y"});
  j["c"] = Json::object();
  const std::string s = dump_deterministic(j, 0);
  CHECK(s.find("0.33333333333333331") != std::string::npos);
  CHECK(s.find("\"x\\\"y\"") != std::string::npos);
}
