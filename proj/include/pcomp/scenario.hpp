#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pcomp/grid.hpp"
#include "pcomp/model.hpp"

namespace pcomp {

struct SolverSettings {
  double tolerance = 1e-10;  // Newton residual target
  double dt = 0.0;           // 0: scenario default
  int threads = 1;
  bool operator==(const SolverSettings&) const = default;
};

struct RunSettings {
  std::uint64_t seed = 20240521;
  std::size_t random_seeds = 16;
  std::vector<double> k_values{10.0, 30.0, 100.0, 300.0, 1000.0};
  double simulate_t_end = 10.0;
  std::size_t record_every = 1000;
  std::size_t front_periods = 100;
  std::size_t front_nodes_per_period = 64;
  double front_t_end = 60.0;
  bool operator==(const RunSettings&) const = default;
};

struct Scenario {
  std::string name = "default";
  SystemParams params;
  ReactionSpec spec;
  std::size_t nodes = kDefaultNodes;
  SolverSettings solver;
  RunSettings run;

  PeriodicGrid grid() const { return PeriodicGrid(params.L, nodes); }
  bool operator==(const Scenario&) const = default;
};

/// L = 1, d = 2, alpha = 1, k = 100, mu1 = 1 + 0.3 sin(2 pi x), mu2 = nu1 = nu2 = 1.
Scenario default_scenario();

/// Parses the sectioned key = value format written by dump_scenario. Keys
/// missing from the text keep their defaults; unknown sections and keys are
/// rejected with ParseError. The result is validated, including the
/// hypothesis audit (ModelError).
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

/// Canonical text: fixed key order, shortest round-trip numbers, zero Fourier
/// terms omitted. parse_scenario(dump_scenario(s)) == s.
std::string dump_scenario(const Scenario& scenario);

/// Fourier series in the form "c0 + a*cos(q) - b*sin(q)", q the harmonic index.
std::string format_series(const FourierSeries& series);
FourierSeries parse_series(std::string_view text);

/// 16 hex digits of the FNV-1a hash of the canonical text.
std::string scenario_hash(const Scenario& scenario);

void validate_scenario(const Scenario& scenario);

/// The scenario with one key replaced, revalidated; throws ParseError for
/// unknown keys or malformed values.
Scenario with_value(const Scenario& scenario, std::string_view section, std::string_view key,
                    std::string_view value);

std::string format_number(double value);

}  // namespace pcomp
