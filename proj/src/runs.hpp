#pragma once

#include <string>
#include <vector>

#include "pcomp/scenario.hpp"
#include "report_json.hpp"

namespace pcomp {

enum class RunKind { check, extinction, eigen, coexist, simulate, front, sweep, segregate };

struct RunRequest {
  RunKind kind = RunKind::check;
  double k = -1.0;      // < 0: scenario value
  double t_end = -1.0;  // <= 0: scenario value
  int species = 1;      // tracked species for fronts
  int segregate = 2;    // 0: eta, 1: gamma, 2: both
};

/// Column names carry their units, e.g. "x [length]".
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct RunOutput {
  json report;
  bool inconclusive = false;
  std::vector<Table> tables;
};

RunOutput execute(const Scenario& scenario, const RunRequest& request);

std::string to_string(RunKind kind);

/// "# manifest: <manifest>" line, header line, then one line per row.
std::string table_csv(const Table& table, const std::string& manifest);

}  // namespace pcomp
