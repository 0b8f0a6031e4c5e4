#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "pcomp/pcomp.h"

namespace fs = std::filesystem;

namespace {

struct Globals {
  std::string scenario_path;
  std::string out;
  int grid = 0;
  double tol = 0.0;
  int threads = 0;
  bool quiet = false;
};

struct SubOptions {
  double k = -1.0;
  double t_end = -1.0;
  int species = 1;
  std::string kind = "both";
};

class Failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void check(pcomp_status s) {
  if (s == PCOMP_OK) return;
  std::string msg = pcomp_last_error();
  throw Failure(msg.empty() ? "error " + std::to_string(static_cast<int>(s)) : msg);
}

std::string format(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Failure("cannot write " + path.string());
  f << text;
  if (!f) throw Failure("write failed for " + path.string());
}

int run(const Globals& g, pcomp_run_kind kind, const std::string& name, const SubOptions& sub) {
  pcomp_scenario* raw = nullptr;
  if (g.scenario_path.empty())
    check(pcomp_scenario_default(&raw));
  else
    check(pcomp_scenario_load(g.scenario_path.c_str(), &raw));
  std::unique_ptr<pcomp_scenario, void (*)(pcomp_scenario*)> scenario(raw, pcomp_scenario_free);
  if (g.grid > 0) check(pcomp_scenario_set(raw, "grid", "nodes", std::to_string(g.grid).c_str()));
  if (g.tol > 0.0) check(pcomp_scenario_set(raw, "solver", "tolerance", format(g.tol).c_str()));
  if (g.threads > 0)
    check(pcomp_scenario_set(raw, "solver", "threads", std::to_string(g.threads).c_str()));

  pcomp_run_options opts;
  pcomp_run_options_init(&opts);
  opts.k = sub.k;
  opts.t_end = sub.t_end;
  opts.species = sub.species;
  opts.segregate = sub.kind == "eta" ? PCOMP_SEGREGATE_ETA
                   : sub.kind == "gamma" ? PCOMP_SEGREGATE_GAMMA
                                         : PCOMP_SEGREGATE_BOTH;

  const auto start = std::chrono::steady_clock::now();
  pcomp_result* rr = nullptr;
  check(pcomp_run(raw, kind, &opts, &rr));
  std::unique_ptr<pcomp_result, void (*)(pcomp_result*)> result(rr, pcomp_result_free);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const char* hash = nullptr;
  const char* text = nullptr;
  const char* sname = nullptr;
  check(pcomp_scenario_hash(raw, &hash));
  check(pcomp_scenario_dump(raw, &text));
  check(pcomp_scenario_name(raw, &sname));

  fs::path root = g.out;
  if (root.empty()) {
    const char* env = std::getenv("PCOMP_OUTPUT_ROOT");
    root = env != nullptr && *env != '\0' ? fs::path(env) : fs::path("pcomp-output");
  }
  const fs::path dir = root / (std::string(sname) + "-" + hash) / name;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Failure("cannot create " + dir.string() + ": " + ec.message());

  const std::string report = pcomp_result_report_json(rr);
  write_file(dir / "scenario.ini", text);
  write_file(dir / "report.json", report);
  std::vector<std::string> files{"scenario.ini", "report.json"};
  for (size_t i = 0; i < pcomp_result_table_count(rr); ++i) {
    const char* csv = nullptr;
    check(pcomp_result_table_csv(rr, i, "manifest.json", &csv));
    const std::string file = std::string(pcomp_result_table_name(rr, i)) + ".csv";
    write_file(dir / file, csv);
    files.push_back(file);
  }

  const bool inconclusive = pcomp_result_inconclusive(rr) != 0;
  const auto parsed = nlohmann::ordered_json::parse(report);
  nlohmann::ordered_json manifest = {
      {"scenario_hash", hash},
      {"scenario", sname},
      {"toolkit_version", pcomp_version()},
      {"subcommand", name},
      {"wall_clock_seconds", wall},
      {"tolerances",
       {{"newton_residual", parsed["scenario"]["tolerance"]},
        {"segregated_residual", 1e-8},
        {"eigen_system", 1e-13},
        {"front_min_r2", 0.999}}},
      {"verdict", inconclusive ? "inconclusive" : "ok"},
      {"files", files}};
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");

  if (!g.quiet) std::cout << report;
  std::cerr << name << ": " << (inconclusive ? "inconclusive" : "ok") << ", artifacts in "
            << dir.string() << "\n";
  return inconclusive ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-species competition-diffusion in periodic media"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pcomp_version()));
  Globals g;
  app.add_option("-s,--scenario", g.scenario_path, "Scenario file (default scenario if omitted)")
      ->check(CLI::ExistingFile);
  app.add_option("--out", g.out, "Output root (overrides PCOMP_OUTPUT_ROOT)");
  app.add_option("--grid", g.grid, "Nodes per period")->check(CLI::Range(16, 1 << 16));
  app.add_option("--tol", g.tol, "Newton residual tolerance")->check(CLI::PositiveNumber);
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::Range(1, 1024));
  app.add_flag("-q,--quiet", g.quiet, "Do not print the report");

  struct Entry {
    const char* name;
    pcomp_run_kind kind;
    const char* help;
  };
  const std::vector<Entry> entries = {
      {"check", PCOMP_RUN_CHECK, "Audit the hypotheses of the scenario"},
      {"extinction", PCOMP_RUN_EXTINCTION, "Extinction states and their stability"},
      {"eigen", PCOMP_RUN_EIGEN, "Principal periodic eigenvalues"},
      {"coexist", PCOMP_RUN_COEXIST, "Coexistence states from the seed bank"},
      {"simulate", PCOMP_RUN_SIMULATE, "Integrate the parabolic system"},
      {"front", PCOMP_RUN_FRONT, "Pulsating front and its speed"},
      {"sweep", PCOMP_RUN_SWEEP, "Coexistence states along a k sweep"},
      {"segregate", PCOMP_RUN_SEGREGATE, "Solutions of the segregated limit equations"},
  };
  SubOptions sub;
  std::vector<std::pair<CLI::App*, const Entry*>> subs;
  for (const auto& e : entries) {
    CLI::App* s = app.add_subcommand(e.name, e.help);
    const std::string n = e.name;
    if (n == "extinction" || n == "eigen" || n == "coexist" || n == "simulate" || n == "front" ||
        n == "segregate")
      s->add_option("-k,--k", sub.k, "Competition rate override")->check(CLI::NonNegativeNumber);
    if (n == "simulate" || n == "front")
      s->add_option("--t-end", sub.t_end, "Time horizon override")->check(CLI::PositiveNumber);
    if (n == "front")
      s->add_option("--species", sub.species, "Tracked species")->check(CLI::IsMember({1, 2}));
    if (n == "segregate")
      s->add_option("--kind", sub.kind, "eta, gamma or both")
          ->check(CLI::IsMember({"eta", "gamma", "both"}));
    subs.emplace_back(s, &e);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    for (const auto& [s, e] : subs)
      if (s->parsed()) return run(g, e->kind, e->name, sub);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
