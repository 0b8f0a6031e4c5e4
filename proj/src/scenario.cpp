#include "pcomp/scenario.hpp"

#include <array>
#include <charconv>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "pcomp/errors.hpp"

namespace pcomp {

namespace {

// Column numbers are 1-based offsets into the original line.
struct Cursor {
  std::string_view text;
  std::size_t pos = 0;
  std::size_t line = 1;
  std::size_t column0 = 1;  // column of text[0]

  std::size_t column() const { return column0 + pos; }
  void skip_space() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  }
  bool done() {
    skip_space();
    return pos >= text.size();
  }
  char peek() { return done() ? '\0' : text[pos]; }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line, column(), what); }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos;
  }
  double number() {
    skip_space();
    double v = 0.0;
    const char* first = text.data() + pos;
    const auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), v);
    if (ec != std::errc() || !std::isfinite(v)) fail("expected a finite number");
    pos += static_cast<std::size_t>(ptr - first);
    return v;
  }
  std::size_t index() {
    skip_space();
    std::size_t v = 0;
    const char* first = text.data() + pos;
    const auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), v);
    if (ec != std::errc()) fail("expected a non-negative integer");
    pos += static_cast<std::size_t>(ptr - first);
    return v;
  }
  bool keyword(std::string_view word) {
    skip_space();
    if (text.substr(pos, word.size()) != word) return false;
    pos += word.size();
    return true;
  }
};

FourierSeries series_from(Cursor& c) {
  double mean = 0.0;
  std::vector<double> cs, ss;
  bool first = true;
  while (!c.done()) {
    double sign = 1.0;
    if (c.peek() == '+' || c.peek() == '-') {
      sign = c.peek() == '-' ? -1.0 : 1.0;
      ++c.pos;
    } else if (!first) {
      c.fail("expected '+' or '-' between terms");
    }
    first = false;
    double amplitude = 1.0;
    const char head = c.peek();
    const bool bare_wave = head == 'c' || head == 's';
    if (!bare_wave) {
      amplitude = c.number();
      if (c.peek() != '*') {
        mean += sign * amplitude;
        continue;
      }
      ++c.pos;
    }
    std::vector<double>* target = nullptr;
    if (c.keyword("cos"))
      target = &cs;
    else if (c.keyword("sin"))
      target = &ss;
    else
      c.fail("expected cos(q) or sin(q)");
    c.expect('(');
    const std::size_t q = c.index();
    if (q == 0 || q > 64) c.fail("harmonic index must be between 1 and 64");
    c.expect(')');
    if (target->size() < q) target->resize(q, 0.0);
    (*target)[q - 1] += sign * amplitude;
  }
  if (first) c.fail("empty Fourier series");
  const std::size_t h = std::max(cs.size(), ss.size());
  cs.resize(h, 0.0);
  ss.resize(h, 0.0);
  while (!cs.empty() && cs.back() == 0.0 && ss.back() == 0.0) {
    cs.pop_back();
    ss.pop_back();
  }
  return FourierSeries(mean, std::move(cs), std::move(ss));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double whole_number(Cursor& c) {
  const double v = c.number();
  if (!c.done()) c.fail("unexpected trailing text");
  return v;
}

std::size_t whole_index(Cursor& c) {
  const std::size_t v = c.index();
  if (!c.done()) c.fail("unexpected trailing text");
  return v;
}

std::vector<double> number_list(Cursor& c) {
  std::vector<double> out;
  out.push_back(c.number());
  while (!c.done()) {
    c.expect(',');
    out.push_back(c.number());
  }
  return out;
}

}  // namespace

std::string format_number(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw UsageError("number could not be formatted");
  return std::string(buf.data(), ptr);
}

std::string format_series(const FourierSeries& series) {
  std::string out = format_number(series.mean());
  auto term = [&](double a, const char* wave, std::size_t q) {
    if (a == 0.0) return;
    out += a < 0.0 ? " - " : " + ";
    out += format_number(std::abs(a)) + "*" + wave + "(" + std::to_string(q) + ")";
  };
  for (std::size_t q = 0; q < series.harmonics(); ++q) {
    term(series.cos_amplitudes()[q], "cos", q + 1);
    term(series.sin_amplitudes()[q], "sin", q + 1);
  }
  return out;
}

FourierSeries parse_series(std::string_view text) {
  Cursor c{text};
  return series_from(c);
}

Scenario default_scenario() {
  Scenario s;
  s.name = "default";
  s.params = SystemParams{2.0, 100.0, 1.0, 1.0};
  s.spec.mu = {FourierSeries(1.0, {0.0}, {0.3}), FourierSeries::constant(1.0)};
  s.spec.nu = {FourierSeries::constant(1.0), FourierSeries::constant(1.0)};
  return s;
}

void validate_scenario(const Scenario& s) {
  if (s.name.empty()) throw ConfigError("scenario name must not be empty");
  for (char ch : s.name)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '.'))
      throw ConfigError("scenario name may contain only letters, digits, '_', '-' and '.'");
  s.params.validate();
  if (s.nodes < kMinNodes) throw ConfigError("grid nodes must be at least 16");
  if (!(s.solver.tolerance > 0.0) || !std::isfinite(s.solver.tolerance))
    throw ConfigError("solver tolerance must be positive");
  if (!(s.solver.dt >= 0.0) || !std::isfinite(s.solver.dt))
    throw ConfigError("solver dt must be non-negative (0 selects the default)");
  if (s.solver.threads < 1) throw ConfigError("solver threads must be at least 1");
  if (s.run.k_values.empty()) throw ConfigError("run k_values must not be empty");
  for (std::size_t i = 0; i < s.run.k_values.size(); ++i) {
    if (!(s.run.k_values[i] > 0.0)) throw ConfigError("run k_values must be positive");
    if (i > 0 && !(s.run.k_values[i] > s.run.k_values[i - 1]))
      throw ConfigError("run k_values must be increasing");
  }
  if (!(s.run.simulate_t_end > 0.0) || !(s.run.front_t_end > 0.0))
    throw ConfigError("run horizons must be positive");
  if (s.run.record_every == 0) throw ConfigError("run record_every must be positive");
  if (s.run.front_periods < 8) throw ConfigError("run front_periods must be at least 8");
  if (s.run.front_nodes_per_period < 8)
    throw ConfigError("run front_nodes_per_period must be at least 8");
  check_hypotheses(s.spec, s.params);
}

Scenario parse_scenario(std::string_view text) {
  Scenario s = default_scenario();
  using Setter = void (*)(Scenario&, Cursor&);
  static const std::map<std::string, std::map<std::string, Setter>> keys = {
      {"scenario",
       {{"name",
         [](Scenario& s, Cursor& c) {
           c.skip_space();
           s.name = std::string(trim(c.text.substr(c.pos)));
           c.pos = c.text.size();
           if (s.name.empty()) c.fail("empty name");
         }},
        {"seed", [](Scenario& s, Cursor& c) { s.run.seed = whole_index(c); }}}},
      {"model",
       {{"L", [](Scenario& s, Cursor& c) { s.params.L = whole_number(c); }},
        {"d", [](Scenario& s, Cursor& c) { s.params.d = whole_number(c); }},
        {"k", [](Scenario& s, Cursor& c) { s.params.k = whole_number(c); }},
        {"alpha", [](Scenario& s, Cursor& c) { s.params.alpha = whole_number(c); }},
        {"mu1", [](Scenario& s, Cursor& c) { s.spec.mu[0] = series_from(c); }},
        {"mu2", [](Scenario& s, Cursor& c) { s.spec.mu[1] = series_from(c); }},
        {"nu1", [](Scenario& s, Cursor& c) { s.spec.nu[0] = series_from(c); }},
        {"nu2", [](Scenario& s, Cursor& c) { s.spec.nu[1] = series_from(c); }}}},
      {"grid", {{"nodes", [](Scenario& s, Cursor& c) { s.nodes = whole_index(c); }}}},
      {"solver",
       {{"tolerance", [](Scenario& s, Cursor& c) { s.solver.tolerance = whole_number(c); }},
        {"dt", [](Scenario& s, Cursor& c) { s.solver.dt = whole_number(c); }},
        {"threads",
         [](Scenario& s, Cursor& c) { s.solver.threads = static_cast<int>(whole_index(c)); }}}},
      {"run",
       {{"k_values", [](Scenario& s, Cursor& c) { s.run.k_values = number_list(c); }},
        {"random_seeds", [](Scenario& s, Cursor& c) { s.run.random_seeds = whole_index(c); }},
        {"simulate_t_end", [](Scenario& s, Cursor& c) { s.run.simulate_t_end = whole_number(c); }},
        {"record_every", [](Scenario& s, Cursor& c) { s.run.record_every = whole_index(c); }},
        {"front_periods", [](Scenario& s, Cursor& c) { s.run.front_periods = whole_index(c); }},
        {"front_nodes_per_period",
         [](Scenario& s, Cursor& c) { s.run.front_nodes_per_period = whole_index(c); }},
        {"front_t_end", [](Scenario& s, Cursor& c) { s.run.front_t_end = whole_number(c); }}}},
  };

  std::string section;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find('\n', start), text.size());
    std::string_view raw = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = raw.find_first_of("#;"); hash != std::string_view::npos)
      raw = raw.substr(0, hash);
    const std::string_view line = trim(raw);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const std::size_t indent = static_cast<std::size_t>(line.data() - raw.data());
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(line_no, indent + line.size(), "expected ']'");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!keys.contains(section))
        throw ParseError(line_no, indent + 2, "unknown section [" + section + "]");
    } else {
      const std::size_t eq = line.find('=');
      if (eq == std::string_view::npos) throw ParseError(line_no, indent + 1, "expected key = value");
      const std::string key(trim(line.substr(0, eq)));
      if (section.empty()) throw ParseError(line_no, indent + 1, "key outside of a section");
      const auto& table = keys.at(section);
      const auto it = table.find(key);
      if (it == table.end())
        throw ParseError(line_no, indent + 1, "unknown key '" + key + "' in [" + section + "]");
      if (!seen.insert(section + "." + key).second)
        throw ParseError(line_no, indent + 1, "duplicate key '" + key + "'");
      Cursor c{line.substr(eq + 1), 0, line_no, indent + eq + 2};
      it->second(s, c);
    }
    if (end == text.size()) break;
  }
  validate_scenario(s);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string dump_scenario(const Scenario& s) {
  std::string out;
  auto kv = [&](const char* key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };
  out += "[scenario]\n";
  kv("name", s.name);
  kv("seed", std::to_string(s.run.seed));
  out += "\n[model]\n";
  kv("L", format_number(s.params.L));
  kv("d", format_number(s.params.d));
  kv("k", format_number(s.params.k));
  kv("alpha", format_number(s.params.alpha));
  kv("mu1", format_series(s.spec.mu[0]));
  kv("mu2", format_series(s.spec.mu[1]));
  kv("nu1", format_series(s.spec.nu[0]));
  kv("nu2", format_series(s.spec.nu[1]));
  out += "\n[grid]\n";
  kv("nodes", std::to_string(s.nodes));
  out += "\n[solver]\n";
  kv("tolerance", format_number(s.solver.tolerance));
  kv("dt", format_number(s.solver.dt));
  kv("threads", std::to_string(s.solver.threads));
  out += "\n[run]\n";
  std::string ks;
  for (std::size_t i = 0; i < s.run.k_values.size(); ++i)
    ks += (i ? ", " : "") + format_number(s.run.k_values[i]);
  kv("k_values", ks);
  kv("random_seeds", std::to_string(s.run.random_seeds));
  kv("simulate_t_end", format_number(s.run.simulate_t_end));
  kv("record_every", std::to_string(s.run.record_every));
  kv("front_periods", std::to_string(s.run.front_periods));
  kv("front_nodes_per_period", std::to_string(s.run.front_nodes_per_period));
  kv("front_t_end", format_number(s.run.front_t_end));
  return out;
}

Scenario with_value(const Scenario& scenario, std::string_view section, std::string_view key,
                    std::string_view value) {
  if (value.find('\n') != std::string_view::npos) throw ParseError(1, 1, "value spans lines");
  const std::string text = dump_scenario(scenario);
  const std::string header = "[" + std::string(section) + "]\n";
  const std::size_t at = text.find(header);
  if (at == std::string::npos)
    throw ParseError(1, 1, "unknown section [" + std::string(section) + "]");
  const std::string prefix = "\n" + std::string(key) + " = ";
  std::size_t line = text.find(prefix, at + header.size() - 1);
  const std::size_t next = text.find("\n[", at + header.size());
  if (line == std::string::npos || (next != std::string::npos && line > next))
    throw ParseError(1, 1, "unknown key '" + std::string(key) + "' in [" + std::string(section) + "]");
  line += prefix.size();
  const std::size_t eol = text.find('\n', line);
  return parse_scenario(text.substr(0, line) + std::string(value) + text.substr(eol));
}

std::string scenario_hash(const Scenario& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : dump_scenario(s)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = digits[h & 0xf];
  return out;
}

}  // namespace pcomp
