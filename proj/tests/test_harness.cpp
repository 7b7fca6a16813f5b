#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "spinbound/config.hpp"
#include "spinbound/errors.hpp"
#include "spinbound/version.hpp"

using namespace spinbound;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

int cli(std::vector<std::string> args) {
  std::vector<char*> argv;
  args.insert(args.begin(), "spinbound");
  for (auto& a : args) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("config: defaults, overrides, unknown keys") {
  const auto cfg = make_config("perc", {{"rho", "0.02"}});
  CHECK(cfg.get_double("rho") == 0.02);
  CHECK(cfg.get_long("replicas") == 100000);
  CHECK(cfg.get_bool("normalized"));
  CHECK(cfg.output_path() == "spinbound_perc.csv");
  CHECK_THROWS_WITH_AS(make_config("perc", {{"rh0", "1"}}),
                       doctest::Contains("rh0"), std::invalid_argument);
  CHECK_THROWS_AS(make_config("frobnicate", {}), std::invalid_argument);
}

TEST_CASE("config file values are overridden by flags") {
  const std::string path = "/tmp/spinbound_cfg_test.txt";
  spit(path, "# comment\nrho=0.07\nreplicas=12\n");
  const auto cfg = make_config("perc", {{"rho", "0.09"}}, path);
  CHECK(cfg.get_double("rho") == 0.09);
  CHECK(cfg.get_long("replicas") == 12);
  spit(path, "bogus_key=1\n");
  CHECK_THROWS_WITH_AS(make_config("perc", {}, path),
                       doctest::Contains("bogus_key"), std::invalid_argument);
}

TEST_CASE("canonical serialization round-trips") {
  const auto cfg = make_config("mc", {{"beta", "0.75"}, {"M", "12"}});
  const auto text = canonical_serialization(cfg);
  auto kv = parse_flat_config(text);
  CHECK(kv["subcommand"] == "mc");
  kv.erase("subcommand");
  const auto cfg2 = make_config("mc", kv);
  CHECK(canonical_serialization(cfg2) == text);
}

TEST_CASE("csv numbers: 17 significant digits, non-finite rejected") {
  CHECK(csv_number(1.0 / 3.0) == "0.33333333333333331");
  CHECK(csv_number(0.0) == "0");
  CHECK_THROWS_AS(csv_number(std::nan("")), NumericalError);
  CHECK_THROWS_AS(csv_number(1.0 / 0.0), NumericalError);
}

TEST_CASE("cli: validation failures exit with code 2") {
  CHECK(cli({"bound", "--bogus", "1"}) == 2);
  CHECK(cli({"mc", "--burn-in", "10", "--output", "/tmp/sb_never.csv"}) == 2);
  CHECK(cli({}) == 2);
}

TEST_CASE("cli: numerical failure exits with code 3") {
  // sup-norm budget unreachable within K_max
  CHECK(cli({"bound", "--interaction", "abs_kink", "--epsilon", "1e-9",
             "--output", "/tmp/sb_fail.csv"}) == 3);
}

TEST_CASE("run + replay: bitwise-identical artifacts") {
  const std::string out_a = "/tmp/sb_replay_a.csv";
  const std::string out_b = "/tmp/sb_replay_b.csv";
  CHECK(cli({"perc", "--experiment", "tails", "--M", "16", "--replicas",
             "2000", "--kmax", "4", "--seed", "7", "--output", out_a}) == 0);
  CHECK(cli({"replay", out_a + ".summary.txt", "--output", out_b}) == 0);
  CHECK(slurp(out_a) == slurp(out_b));

  // a different seed produces a different artifact
  const std::string out_c = "/tmp/sb_replay_c.csv";
  CHECK(cli({"perc", "--experiment", "tails", "--M", "16", "--replicas",
             "2000", "--kmax", "4", "--seed", "8", "--output", out_c}) == 0);
  CHECK(slurp(out_a) != slurp(out_c));
}

TEST_CASE("replay refuses a version mismatch with exit 2") {
  const std::string out = "/tmp/sb_replay_v.csv";
  REQUIRE(cli({"lemmas", "--kmax", "50", "--output", out}) == 0);
  auto record = slurp(out + ".summary.txt");
  const std::string needle = std::string("version=") + kVersion;
  const auto pos = record.find(needle);
  REQUIRE(pos != std::string::npos);
  record.replace(pos, needle.size(), "version=0.0.0");
  spit(out + ".summary.txt", record);
  CHECK(cli({"replay", out + ".summary.txt"}) == 2);
}

TEST_CASE("summary embeds the fully resolved configuration") {
  const std::string out = "/tmp/sb_summary.csv";
  REQUIRE(cli({"lemmas", "--kmax", "64", "--seed", "123", "--output", out}) == 0);
  const auto record = slurp(out + ".summary.txt");
  CHECK(record.find("subcommand=lemmas") != std::string::npos);
  CHECK(record.find("kmax=64") != std::string::npos);
  CHECK(record.find("seed=123") != std::string::npos);
  CHECK(record.find(std::string("version=") + kVersion) != std::string::npos);
}
