#include "pcomp/pcomp.h"

#include <exception>
#include <memory>
#include <new>
#include <string>

#include "pcomp/errors.hpp"
#include "pcomp/scenario.hpp"
#include "runs.hpp"

#define PCOMP_STRINGIFY2(x) #x
#define PCOMP_STRINGIFY(x) PCOMP_STRINGIFY2(x)

struct pcomp_scenario {
  pcomp::Scenario value;
  std::string dump;
  std::string hash;

  void refresh() {
    dump = pcomp::dump_scenario(value);
    hash = pcomp::scenario_hash(value);
  }
};

struct pcomp_result {
  pcomp::RunOutput output;
  std::string report;
  std::string csv;
};

namespace {

thread_local std::string g_error;
thread_local std::size_t g_line = 0;
thread_local std::size_t g_column = 0;

pcomp_status fail(pcomp_status status, const char* what) {
  g_error = what;
  return status;
}

template <typename Fn>
pcomp_status guarded(Fn&& fn) {
  g_error.clear();
  g_line = g_column = 0;
  try {
    fn();
    return PCOMP_OK;
  } catch (const pcomp::ParseError& e) {
    g_line = e.line();
    g_column = e.column();
    return fail(PCOMP_ERR_PARSE, e.what());
  } catch (const pcomp::Error& e) {
    switch (e.kind()) {
      case pcomp::ErrorKind::config: return fail(PCOMP_ERR_CONFIG, e.what());
      case pcomp::ErrorKind::usage: return fail(PCOMP_ERR_USAGE, e.what());
      case pcomp::ErrorKind::model: return fail(PCOMP_ERR_MODEL, e.what());
      case pcomp::ErrorKind::numerical: return fail(PCOMP_ERR_NUMERICAL, e.what());
      case pcomp::ErrorKind::parse: return fail(PCOMP_ERR_PARSE, e.what());
      case pcomp::ErrorKind::io: return fail(PCOMP_ERR_IO, e.what());
    }
    return fail(PCOMP_ERR_INTERNAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(PCOMP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PCOMP_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PCOMP_ERR_INTERNAL, "unknown error");
  }
}

pcomp_status make_scenario(pcomp::Scenario s, pcomp_scenario** out) {
  auto h = std::make_unique<pcomp_scenario>();
  h->value = std::move(s);
  h->refresh();
  *out = h.release();
  return PCOMP_OK;
}

}  // namespace

extern "C" {

const char* pcomp_version(void) { return PCOMP_STRINGIFY(PCOMP_VERSION); }

const char* pcomp_last_error(void) { return g_error.c_str(); }
size_t pcomp_last_error_line(void) { return g_line; }
size_t pcomp_last_error_column(void) { return g_column; }

void pcomp_run_options_init(pcomp_run_options* options) {
  if (options == nullptr) return;
  options->k = -1.0;
  options->t_end = -1.0;
  options->species = 1;
  options->segregate = PCOMP_SEGREGATE_BOTH;
}

pcomp_status pcomp_scenario_default(pcomp_scenario** out) {
  if (out == nullptr) return fail(PCOMP_ERR_USAGE, "null output pointer");
  return guarded([&] { make_scenario(pcomp::default_scenario(), out); });
}

pcomp_status pcomp_scenario_parse(const char* text, pcomp_scenario** out) {
  if (text == nullptr || out == nullptr) return fail(PCOMP_ERR_USAGE, "null argument");
  return guarded([&] { make_scenario(pcomp::parse_scenario(text), out); });
}

pcomp_status pcomp_scenario_load(const char* path, pcomp_scenario** out) {
  if (path == nullptr || out == nullptr) return fail(PCOMP_ERR_USAGE, "null argument");
  return guarded([&] { make_scenario(pcomp::load_scenario(path), out); });
}

void pcomp_scenario_free(pcomp_scenario* scenario) { delete scenario; }

pcomp_status pcomp_scenario_set(pcomp_scenario* scenario, const char* section, const char* key,
                                const char* value) {
  if (scenario == nullptr || section == nullptr || key == nullptr || value == nullptr)
    return fail(PCOMP_ERR_USAGE, "null argument");
  return guarded([&] {
    scenario->value = pcomp::with_value(scenario->value, section, key, value);
    scenario->refresh();
  });
}

pcomp_status pcomp_scenario_dump(const pcomp_scenario* scenario, const char** text) {
  if (scenario == nullptr || text == nullptr) return fail(PCOMP_ERR_USAGE, "null argument");
  *text = scenario->dump.c_str();
  return PCOMP_OK;
}

pcomp_status pcomp_scenario_hash(const pcomp_scenario* scenario, const char** hash) {
  if (scenario == nullptr || hash == nullptr) return fail(PCOMP_ERR_USAGE, "null argument");
  *hash = scenario->hash.c_str();
  return PCOMP_OK;
}

pcomp_status pcomp_scenario_name(const pcomp_scenario* scenario, const char** name) {
  if (scenario == nullptr || name == nullptr) return fail(PCOMP_ERR_USAGE, "null argument");
  *name = scenario->value.name.c_str();
  return PCOMP_OK;
}

pcomp_status pcomp_run(const pcomp_scenario* scenario, pcomp_run_kind kind,
                       const pcomp_run_options* options, pcomp_result** out) {
  if (scenario == nullptr || out == nullptr) return fail(PCOMP_ERR_USAGE, "null argument");
  if (kind < PCOMP_RUN_CHECK || kind > PCOMP_RUN_SEGREGATE)
    return fail(PCOMP_ERR_USAGE, "unknown run kind");
  pcomp_run_options opts;
  pcomp_run_options_init(&opts);
  if (options != nullptr) opts = *options;
  return guarded([&] {
    pcomp::RunRequest req;
    req.kind = static_cast<pcomp::RunKind>(kind);
    req.k = opts.k;
    req.t_end = opts.t_end;
    req.species = opts.species;
    req.segregate = opts.segregate;
    auto r = std::make_unique<pcomp_result>();
    r->output = pcomp::execute(scenario->value, req);
    r->report = r->output.report.dump(2) + "\n";
    *out = r.release();
  });
}

void pcomp_result_free(pcomp_result* result) { delete result; }

int pcomp_result_inconclusive(const pcomp_result* result) {
  return result != nullptr && result->output.inconclusive ? 1 : 0;
}

const char* pcomp_result_report_json(const pcomp_result* result) {
  return result == nullptr ? "" : result->report.c_str();
}

size_t pcomp_result_table_count(const pcomp_result* result) {
  return result == nullptr ? 0 : result->output.tables.size();
}

const char* pcomp_result_table_name(const pcomp_result* result, size_t index) {
  if (result == nullptr || index >= result->output.tables.size()) return nullptr;
  return result->output.tables[index].name.c_str();
}

size_t pcomp_result_table_rows(const pcomp_result* result, size_t index) {
  if (result == nullptr || index >= result->output.tables.size()) return 0;
  return result->output.tables[index].rows.size();
}

pcomp_status pcomp_result_table_csv(pcomp_result* result, size_t index, const char* manifest,
                                    const char** csv) {
  if (result == nullptr || manifest == nullptr || csv == nullptr)
    return fail(PCOMP_ERR_USAGE, "null argument");
  if (index >= result->output.tables.size()) return fail(PCOMP_ERR_USAGE, "table index out of range");
  return guarded([&] {
    result->csv = pcomp::table_csv(result->output.tables[index], manifest);
    *csv = result->csv.c_str();
  });
}

}  // extern "C"
