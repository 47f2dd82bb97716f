#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "xcal/cli.hpp"

using namespace xcal;
using namespace xcal::cli;
namespace fs = std::filesystem;

namespace {

fs::path fresh_out_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("xcal_cli_" + tag);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config parsing covers every documented key") {
  nlohmann::json doc = {
      {"scenario", "radial-fan"},
      {"params", {{"rho0", 2.0}, {"t0", 0.5}, {"analytic_fields", false}}},
      {"quad-order", 4},
      {"subcells", 16},
      {"ode-step", 5e-4},
      {"seeds", {{0.0, 1.0, 2.0}}},
      {"seed", 99},
      {"bump-count", 3},
      {"sample-count", 50},
      {"out-dir", "/tmp/somewhere"},
      {"formats", {"csv"}},
      {"perturb-sigma", 0.25},
      {"balance-tol", 1e-7},
      {"region-tol", 1e-5},
      {"current-tol", 1e-3}};
  RunConfig c = parse_config(doc);
  CHECK(c.scenario == "radial-fan");
  CHECK(c.params.rho0 == 2.0);
  CHECK(c.params.t0 == 0.5);
  CHECK(c.params.analytic_fields == false);
  CHECK(c.quad_order == 4);
  CHECK(c.quad_order_given);
  CHECK(c.subcells == 16);
  CHECK(c.subcells_given);
  CHECK(c.ode_step == 5e-4);
  REQUIRE(c.seeds.size() == 1);
  CHECK(c.seeds[0] == std::vector<double>{0.0, 1.0, 2.0});
  CHECK(c.seeds_given);
  CHECK(c.rng_seed == 99);
  CHECK(c.bump_count == 3);
  CHECK(c.sample_count == 50);
  CHECK(c.out_dir == "/tmp/somewhere");
  CHECK(c.write_csv);
  CHECK(!c.write_svg);
  CHECK(c.perturb_sigma == 0.25);
  CHECK(c.balance_tol == 1e-7);
  CHECK(c.region_tol == 1e-5);
  CHECK(c.current_tol == 1e-3);
}

TEST_CASE("config parsing rejects junk") {
  CHECK_THROWS_AS(parse_config(nlohmann::json::array()), std::invalid_argument);
  CHECK_THROWS_AS(parse_config({{"no-such-key", 1}}), std::invalid_argument);
  CHECK_THROWS_AS(parse_config({{"params", {{"bogus", 1.0}}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_config({{"formats", {"png"}}}), std::invalid_argument);
  CHECK_THROWS_AS(parse_config({{"quad-order", "eight"}}),
                  std::invalid_argument);

  RunConfig bad;
  bad.ode_step = 0.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = RunConfig{};
  bad.subcells = -1;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = RunConfig{};
  bad.bump_count = -2;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("config files load and report their own failures") {
  const fs::path dir = fresh_out_dir("cfg");
  fs::create_directories(dir);
  const fs::path good = dir / "good.json";
  {
    std::ofstream out(good);
    out << R"({"scenario": "drift1d", "seed": 7})";
  }
  RunConfig c = load_config_file(good.string());
  CHECK(c.scenario == "drift1d");
  CHECK(c.rng_seed == 7);

  CHECK_THROWS_AS(load_config_file((dir / "missing.json").string()),
                  std::invalid_argument);
  const fs::path broken = dir / "broken.json";
  {
    std::ofstream out(broken);
    out << "{not json";
  }
  CHECK_THROWS_AS(load_config_file(broken.string()), std::invalid_argument);
}

TEST_CASE("floats render with 17 significant digits and round-trip") {
  CHECK(format_float(0.5) == "0.5");
  CHECK(format_float(1.0 / 3.0) == "0.33333333333333331");
  const double v = 0.1234567890123456789;
  CHECK(std::strtod(format_float(v).c_str(), nullptr) == v);
}

TEST_CASE("worldline CSV layout: header, one row per sample, LF endings") {
  Worldline w;
  w.dim = 2;
  w.params = {0.0, 0.5};
  w.points = {Vec{0.0, 1.0}, Vec{0.5, 0.9}};
  const std::string csv = worldline_csv(w);
  CHECK(csv.substr(0, 11) == "param,t,x1\n");
  CHECK(csv.find("0.90000000000000002") != std::string::npos);
  CHECK(csv.find('\r') == std::string::npos);
  int lines = 0;
  for (char ch : csv)
    if (ch == '\n') ++lines;
  CHECK(lines == 3);
}

TEST_CASE("SVG output carries one polyline per track") {
  Worldline a;
  a.dim = 2;
  a.params = {0.0, 1.0};
  a.points = {Vec{0.0, 0.0}, Vec{1.0, 1.0}};
  Worldline b = a;
  b.points = {Vec{0.0, 1.0}, Vec{1.0, 0.0}};
  const std::string svg = worldlines_svg({a, b});
  CHECK(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\"") !=
        std::string::npos);
  size_t n = 0;
  for (size_t at = svg.find("<polyline"); at != std::string::npos;
       at = svg.find("<polyline", at + 1))
    ++n;
  CHECK(n == 2);
  CHECK(worldlines_svg({}).find("</svg>") != std::string::npos);
}

TEST_CASE("cmd_worldlines writes one CSV per seed plus the plot") {
  RunConfig c;
  c.scenario = "drift1d";
  c.out_dir = fresh_out_dir("wl").string();
  CommandResult res = cmd_worldlines(c);
  CHECK(res.exit_code == 0);
  // four default seeds -> four CSVs + one SVG
  REQUIRE(res.files.size() == 5);
  CHECK(res.files[0].find("worldline_00.csv") != std::string::npos);
  const std::string csv = slurp(res.files[0]);
  CHECK(csv.substr(0, 11) == "param,t,x1\n");
  CHECK(res.files[4].find("worldlines.svg") != std::string::npos);
  CHECK(slurp(res.files[4]).find("<polyline") != std::string::npos);
  CHECK(res.report["tracks"].size() == 4);
}

TEST_CASE("cmd_worldlines respects an explicitly empty seed list") {
  RunConfig c;
  c.scenario = "drift1d";
  c.seeds_given = true;  // present but empty: integrate nothing
  c.out_dir = fresh_out_dir("wl_empty").string();
  CommandResult res = cmd_worldlines(c);
  CHECK(res.exit_code == 0);
  CHECK(res.files.empty());
}

TEST_CASE("cmd_worldlines flags configuration mistakes") {
  RunConfig c;
  c.scenario = "no-such-scenario";
  CHECK(cmd_worldlines(c).exit_code == 2);

  c = RunConfig{};
  c.scenario = "branching";  // no kinematic flux to integrate
  CHECK(cmd_worldlines(c).exit_code == 2);

  c = RunConfig{};
  c.scenario = "drift1d";
  c.seeds_given = true;
  c.seeds = {{0.1, 5.0}};  // x outside [-2, 2]
  CommandResult res = cmd_worldlines(c);
  CHECK(res.exit_code == 2);
  CHECK(res.report["error"].get<std::string>().find("seed") !=
        std::string::npos);

  c.seeds = {{0.1}};  // wrong arity
  CHECK(cmd_worldlines(c).exit_code == 2);

  c = RunConfig{};
  c.ode_step = -1.0;
  CHECK(cmd_worldlines(c).exit_code == 2);
}

TEST_CASE("cmd_balance passes clean scenarios and reports residuals") {
  RunConfig c;
  c.scenario = "drift1d";
  c.out_dir = fresh_out_dir("bal").string();
  CommandResult res = cmd_balance(c);
  CHECK(res.exit_code == 0);
  CHECK(res.report["pass"] == true);
  CHECK(res.report["spatial"]["max_residual"].get<double>() < 1e-12);
  CHECK(res.report["spacetime"]["max_residual"].get<double>() < 1e-12);
  CHECK(res.report["region"]["relative_residual"].get<double>() < 1e-10);
  REQUIRE(res.files.size() == 1);
  CHECK(slurp(res.files[0]).find("\"pass\": true") != std::string::npos);
}

TEST_CASE("cmd_balance detects an injected supply defect") {
  RunConfig c;
  c.scenario = "drift1d";
  c.perturb_sigma = 0.1;
  c.out_dir = fresh_out_dir("bal_bad").string();
  CommandResult res = cmd_balance(c);
  CHECK(res.exit_code == 1);
  CHECK(res.report["pass"] == false);
  CHECK(res.report["spatial"]["max_residual"].get<double>() ==
        doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("cmd_balance needs smooth fields") {
  RunConfig c;
  c.scenario = "branching";
  CHECK(cmd_balance(c).exit_code == 2);
}

TEST_CASE("cmd_currents verifies a scenario current") {
  RunConfig c;
  c.scenario = "drift1d";
  c.bump_count = 5;
  c.out_dir = fresh_out_dir("cur").string();
  CommandResult res = cmd_currents(c);
  CHECK(res.exit_code == 0);
  CHECK(res.report["pass"] == true);
  CHECK(res.report["vacuous"] == false);
  CHECK(res.report["tests"].size() == 5);
  CHECK(res.report["max_defect"].get<double>() < 1e-4);
}

TEST_CASE("cmd_currents with no probes is a vacuous pass") {
  RunConfig c;
  c.scenario = "drift1d";
  c.bump_count = 0;
  c.out_dir = fresh_out_dir("cur0").string();
  CommandResult res = cmd_currents(c);
  CHECK(res.exit_code == 0);
  CHECK(res.report["vacuous"] == true);
  CHECK(res.report["max_defect"] == 0.0);
  CHECK(res.report["tests"].empty());
}

TEST_CASE("same RNG seed, same bytes") {
  RunConfig c;
  c.scenario = "drift1d";
  c.bump_count = 3;
  c.rng_seed = 31415;
  c.out_dir = fresh_out_dir("det_a").string();
  const CommandResult bal1 = cmd_balance(c);
  const CommandResult cur1 = cmd_currents(c);
  c.out_dir = fresh_out_dir("det_b").string();
  const CommandResult bal2 = cmd_balance(c);
  const CommandResult cur2 = cmd_currents(c);
  CHECK(bal1.report.dump() == bal2.report.dump());
  CHECK(cur1.report.dump() == cur2.report.dump());
  // and the on-disk reports agree byte for byte
  CHECK(slurp(bal1.files[0]) == slurp(bal2.files[0]));
  CHECK(slurp(cur1.files[0]) == slurp(cur2.files[0]));
}

}  // TEST_SUITE
