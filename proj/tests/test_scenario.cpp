#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "pcomp/errors.hpp"
#include "pcomp/scenario.hpp"

using namespace pcomp;

TEST_CASE("default scenario round-trips byte for byte") {
  const Scenario s = default_scenario();
  const std::string text = dump_scenario(s);
  const Scenario back = parse_scenario(text);
  CHECK(back == s);
  CHECK(dump_scenario(back) == text);
  CHECK(scenario_hash(back) == scenario_hash(s));
  CHECK(scenario_hash(s).size() == 16);
}

TEST_CASE("minimal file fills defaults") {
  const Scenario s = parse_scenario("[model]\nk = 3\nmu1 = 2\n");
  CHECK(s.params.k == 3.0);
  CHECK(s.spec.mu[0] == FourierSeries::constant(2.0));
  CHECK(s.params.d == default_scenario().params.d);
  CHECK(s.nodes == 256);
}

TEST_CASE("Fourier series syntax") {
  const FourierSeries f = parse_series("1.5 - 0.25*cos(2) + sin(1) + 0*sin(4)");
  CHECK(f.mean() == 1.5);
  REQUIRE(f.harmonics() == 2);
  CHECK(f.cos_amplitudes()[1] == -0.25);
  CHECK(f.sin_amplitudes()[0] == 1.0);
  CHECK(format_series(f) == "1.5 + 1*sin(1) - 0.25*cos(2)");
  CHECK(parse_series(format_series(f)) == f);
  CHECK_THROWS_AS(parse_series("1 + cos(0)"), ParseError);
  CHECK_THROWS_AS(parse_series("1 2"), ParseError);
}

TEST_CASE("round trip of an irregular scenario") {
  Scenario s = default_scenario();
  s.name = "odd-values_1";
  s.params = SystemParams{0.1 + 0.2, 1.0 / 3.0, 7e-3, 2.718281828459045};
  s.spec.nu[1] = FourierSeries(1.0 / 7.0, {0.01, -0.02}, {0.0, 1e-5});
  s.run.k_values = {0.5, 2.0 / 3.0, 1e4};
  s.solver.threads = 3;
  s.nodes = 100;
  const Scenario back = parse_scenario(dump_scenario(s));
  CHECK(back == s);
}

TEST_CASE("parse errors carry line and column") {
  try {
    parse_scenario("[model]\nk = 3\n  bogus = 1\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 3);
  }
  try {
    parse_scenario("[model]\nd = 2x\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 6);
  }
  CHECK_THROWS_AS(parse_scenario("[nowhere]\n"), ParseError);
  CHECK_THROWS_AS(parse_scenario("k = 3\n"), ParseError);
  CHECK_THROWS_AS(parse_scenario("[model]\nk = 1\nk = 2\n"), ParseError);
}

TEST_CASE("validation names the violated hypothesis") {
  try {
    parse_scenario("[model]\nnu1 = -1\n");
    FAIL("expected a model error");
  } catch (const ModelError& e) {
    CHECK(e.hypothesis() == "H3");
  }
  CHECK_THROWS_AS(parse_scenario("[grid]\nnodes = 8\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("[run]\nk_values = 3, 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("[model]\nd = 0\n"), UsageError);
}

TEST_CASE("single-key override") {
  const Scenario s = with_value(default_scenario(), "grid", "nodes", "512");
  CHECK(s.nodes == 512);
  CHECK(with_value(s, "model", "mu2", "2 + 0.1*cos(1)").spec.mu[1] == FourierSeries(2.0, {0.1}, {}));
  CHECK_THROWS_AS(with_value(s, "grid", "spacing", "1"), ParseError);
  CHECK_THROWS_AS(with_value(s, "grid", "nodes", "many"), ParseError);
}

TEST_CASE("loading from disk") {
  const auto path = std::filesystem::temp_directory_path() / "pcomp_test_scenario.ini";
  {
    std::ofstream f(path);
    f << "# comment\n[scenario]\nname = disk ; trailing comment\n\n[model]\nk = 7\n";
  }
  const Scenario s = load_scenario(path);
  CHECK(s.name == "disk");
  CHECK(s.params.k == 7.0);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_scenario(path), IoError);
}
