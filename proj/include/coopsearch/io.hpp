#pragma once

// Scenario files, field CSVs, trace and summary JSON.
//
// A scenario is a JSON object. Unknown keys are rejected and every error names
// the line of the offending key, which nlohmann does not track on its own: key
// tokens are located in the text and paired with the parsed keys in document
// order.

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <initializer_list>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "coopsearch/engine.hpp"
#include "coopsearch/errors.hpp"
#include "coopsearch/grid_field.hpp"
#include "coopsearch/model_1d.hpp"
#include "coopsearch/model_2d.hpp"
#include "coopsearch/oracle.hpp"

namespace coopsearch::io {

inline constexpr const char* kToolName = "coopsearch";
inline constexpr const char* kToolVersion = "0.1.0";

using Json = nlohmann::ordered_json;

// 17 significant digits, '.' decimal, independent of locale.
inline std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

// Shortest text that reads back to the same double; used in file names.
inline std::string short_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Parsed document with key line numbers

namespace detail {

inline std::vector<int> key_lines(std::string_view text) {
  std::vector<int> lines;
  int line = 1;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      continue;
    }
    if (text[i] != '"') continue;
    const int start = line;
    for (++i; i < text.size() && text[i] != '"'; ++i)
      if (text[i] == '\\') ++i;
    std::size_t j = i + 1;
    while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) {
      if (text[j] == '\n') ++line;
      ++j;
    }
    if (j < text.size() && text[j] == ':') lines.push_back(start);
    i = j - 1;
  }
  return lines;
}

inline void key_paths(const Json& j, const std::string& path, std::vector<std::string>& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      out.push_back(path + "/" + k);
      key_paths(v, path + "/" + k, out);
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) key_paths(j[i], path + "/" + std::to_string(i), out);
  }
}

}  // namespace detail

class Document {
 public:
  Document(std::string name, const std::string& text) : name_(std::move(name)) {
    try {
      root_ = Json::parse(text);
    } catch (const Json::parse_error& e) {
      // The message already carries "line L, column C".
      throw ValidationError(name_ + ": " + e.what());
    }
    const auto lines = detail::key_lines(text);
    std::vector<std::string> paths;
    detail::key_paths(root_, "", paths);
    if (lines.size() != paths.size()) throw ValidationError(name_ + ": duplicate object key");
    for (std::size_t i = 0; i < paths.size(); ++i) lines_[paths[i]] = lines[i];
  }

  const Json& root() const { return root_; }
  const std::string& name() const { return name_; }

  int line(std::string path) const {
    for (;;) {
      if (auto it = lines_.find(path); it != lines_.end()) return it->second;
      const auto cut = path.rfind('/');
      if (cut == std::string::npos || path.empty()) return 1;
      path.resize(cut);
    }
  }

  [[noreturn]] void fail(const std::string& path, const std::string& msg) const {
    throw ValidationError(name_ + ":" + std::to_string(line(path)) + ": " +
                          (path.empty() ? "/" : path) + ": " + msg);
  }

 private:
  std::string name_;
  Json root_;
  std::map<std::string, int> lines_;
};

// One JSON object inside a Document, with typed getters that report errors
// against the document's lines.
class Section {
 public:
  Section(const Document& doc, const Json& obj, std::string path)
      : doc_(doc), obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) doc_.fail(path_, "expected an object");
  }

  void allow(std::initializer_list<const char*> keys) const {
    for (const auto& [k, v] : obj_.items()) {
      bool known = false;
      for (const char* a : keys) known = known || k == a;
      if (!known) doc_.fail(path_ + "/" + k, "unknown key '" + k + "'");
    }
  }

  bool has(const char* key) const { return obj_.contains(key); }
  std::string path(const char* key) const { return path_ + "/" + key; }
  [[noreturn]] void fail(const char* key, const std::string& msg) const { doc_.fail(path(key), msg); }

  const Json& get(const char* key) const {
    if (!has(key)) doc_.fail(path_, std::string("missing key '") + key + "'");
    return obj_.at(key);
  }

  Section sub(const char* key) const { return Section(doc_, get(key), path(key)); }

  double number(const char* key) const {
    const Json& v = get(key);
    if (!v.is_number()) fail(key, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(key, "expected a finite number");
    return d;
  }
  double number(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }

  long long integer(const char* key) const {
    const Json& v = get(key);
    if (!v.is_number_integer()) fail(key, "expected an integer");
    return v.get<long long>();
  }
  long long integer(const char* key, long long fallback) const {
    return has(key) ? integer(key) : fallback;
  }

  bool boolean(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    const Json& v = get(key);
    if (!v.is_boolean()) fail(key, "expected true or false");
    return v.get<bool>();
  }

  std::string string(const char* key) const {
    const Json& v = get(key);
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }
  std::string string(const char* key, const std::string& fallback) const {
    return has(key) ? string(key) : fallback;
  }

  std::string choice(const char* key, const std::string& fallback,
                     std::initializer_list<const char*> options) const {
    const std::string s = string(key, fallback);
    std::string list;
    for (const char* o : options) {
      if (s == o) return s;
      list += list.empty() ? o : std::string(", ") + o;
    }
    fail(key, "expected one of: " + list);
  }

  std::pair<double, double> pair(const char* key) const {
    const Json& v = get(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      fail(key, "expected [x, y]");
    return {v[0].get<double>(), v[1].get<double>()};
  }

  Cell cell(const char* key) const {
    const Json& v = get(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer())
      fail(key, "expected an integer cell [x, y]");
    return {v[0].get<int>(), v[1].get<int>()};
  }

  const Document& doc() const { return doc_; }

 private:
  const Document& doc_;
  const Json& obj_;
  std::string path_;
};

// ---------------------------------------------------------------------------
// Scenario

// Either count evenly spaced values from..to (inclusive) or explicit values.
struct AxisSpec {
  bool explicit_values = false;
  double from = 0.0;
  double to = 0.0;
  std::size_t count = 0;
  std::vector<double> values;

  static AxisSpec range(double from, double to, std::size_t count) {
    AxisSpec s{false, from, to, count, {}};
    s.values.resize(count);
    for (std::size_t i = 0; i < count; ++i)
      s.values[i] = count == 1 ? from
                               : from + (to - from) * static_cast<double>(i) /
                                            static_cast<double>(count - 1);
    return s;
  }
  static AxisSpec list(std::vector<double> v) { return {true, 0.0, 0.0, v.size(), v}; }
};

enum class ModelKind { OneD, TwoD, Simulate };

inline const char* to_string(ModelKind m) {
  switch (m) {
    case ModelKind::OneD: return "one_d";
    case ModelKind::TwoD: return "two_d";
    case ModelKind::Simulate: return "simulate";
  }
  return "?";
}

struct OneDScenario {
  double r2 = 2.0 / 3.0;
  std::vector<std::string> priors{"uniform"};
  AxisSpec r1 = AxisSpec::range(0.005, 0.995, 199);
  AxisSpec a = AxisSpec::range(0.005, 0.995, 199);
  std::size_t quadrature = model1d::kDefaultQuadrature;
};

struct TwoDScenario {
  model2d::Scenario2D geometry;
  std::vector<double> a{0.25, 0.75};
};

enum class ModeSet { Cooperative, Independent, Both };

inline const char* to_string(ModeSet m) {
  switch (m) {
    case ModeSet::Cooperative: return "cooperative";
    case ModeSet::Independent: return "independent";
    case ModeSet::Both: return "both";
  }
  return "?";
}

struct SimulateScenario {
  engine::SearchConfig base;
  bool random_source = true;  // draw the source per seed; otherwise base.source
  std::uint64_t first_seed = 0;
  std::uint64_t seed_count = 1;
  ModeSet modes = ModeSet::Cooperative;
  bool traces = false;  // write per-run traces in a batch
};

struct Scenario {
  ModelKind model = ModelKind::OneD;
  OneDScenario one_d;
  TwoDScenario two_d;
  SimulateScenario simulate;
  std::string out_dir = ".";
};

namespace detail {

// Values must lie in (lo, hi), or in [lo, hi] when closed.
inline AxisSpec read_axis(const Section& parent, const char* key, double lo, double hi,
                          bool closed = false) {
  AxisSpec spec;
  const Json& v = parent.get(key);
  if (v.is_array()) {
    std::vector<double> values;
    for (const auto& x : v) {
      if (!x.is_number()) parent.fail(key, "axis values must be numbers");
      values.push_back(x.get<double>());
    }
    spec = AxisSpec::list(std::move(values));
  } else {
    const Section s = parent.sub(key);
    s.allow({"from", "to", "count"});
    const long long n = s.integer("count");
    if (n < 1 || n > 100000) s.fail("count", "count must lie in [1, 100000]");
    spec = AxisSpec::range(s.number("from"), s.number("to"), static_cast<std::size_t>(n));
  }
  if (spec.values.empty()) parent.fail(key, "axis is empty");
  for (double x : spec.values) {
    const bool ok = closed ? (x >= lo && x <= hi) : (x > lo && x < hi);
    if (!ok)
      parent.fail(key, std::string("axis values must lie in ") + (closed ? "[" : "(") +
                           short_double(lo) + ", " + short_double(hi) + (closed ? "]" : ")"));
  }
  return spec;
}

inline Grid read_grid(const Section& s, const char* key, Grid fallback) {
  if (!s.has(key)) return fallback;
  const Cell c = s.cell(key);
  if (c.x < 2 || c.y < 2 || c.x > 512 || c.y > 512) s.fail(key, "grid dimensions must lie in [2, 512]");
  return {c.x, c.y};
}

inline void read_one_d(const Section& s, OneDScenario& o) {
  s.allow({"r2", "priors", "r1", "a", "quadrature"});
  o.r2 = s.number("r2");
  if (!(o.r2 > 0.0 && o.r2 < 1.0)) s.fail("r2", "r2 must lie strictly inside (0, 1)");
  if (s.has("priors")) {
    const Json& v = s.get("priors");
    if (!v.is_array() || v.empty()) s.fail("priors", "expected a non-empty list");
    o.priors.clear();
    for (const auto& p : v) {
      if (!p.is_string() || (p != "uniform" && p != "gaussian"))
        s.fail("priors", "priors must be \"uniform\" or \"gaussian\"");
      o.priors.push_back(p.get<std::string>());
    }
  }
  if (s.has("r1")) o.r1 = read_axis(s, "r1", 0.0, 1.0, true);
  if (s.has("a")) o.a = read_axis(s, "a", 0.0, 1.0);
  const long long q = s.integer("quadrature", static_cast<long long>(o.quadrature));
  if (q < static_cast<long long>(model1d::kMinQuadrature) || q > 1000001)
    s.fail("quadrature", "quadrature must lie in [101, 1000001]");
  o.quadrature = static_cast<std::size_t>(q);
}

inline void read_two_d(const Section& s, TwoDScenario& o) {
  s.allow({"grid", "r2", "prior_peak", "sigma", "d", "a", "exclude_occupied"});
  auto& g = o.geometry;
  g.grid = read_grid(s, "grid", g.grid);
  if (s.has("r2")) {
    const Cell c = s.cell("r2");
    if (!g.grid.contains(c)) s.fail("r2", "r2 lies off the grid");
    g.r2 = c.center();
  }
  if (s.has("prior_peak")) {
    const auto [x, y] = s.pair("prior_peak");
    g.prior_peak = {x, y};
  }
  g.sigma = s.number("sigma", g.sigma);
  if (!(g.sigma > 0.0)) s.fail("sigma", "sigma must be positive");
  g.radius = s.number("d", g.radius);
  if (!(g.radius > 0.0 && g.radius < 0.5)) s.fail("d", "d must lie in (0, 0.5)");
  g.exclude_occupied = s.boolean("exclude_occupied", g.exclude_occupied);
  if (s.has("a")) o.a = read_axis(s, "a", 0.0, 1.0).values;
}

inline void read_simulate(const Section& s, SimulateScenario& o) {
  s.allow({"grid", "start1", "start2", "source", "a", "d", "max_steps", "modes", "seed", "seeds",
           "traces"});
  auto& c = o.base;
  c.grid = read_grid(s, "grid", c.grid);
  c.start1 = s.has("start1") ? s.cell("start1") : Cell{0, 0};
  c.start2 = s.has("start2") ? s.cell("start2") : Cell{c.grid.nx - 1, c.grid.ny - 1};
  if (!c.grid.contains(c.start1)) s.fail("start1", "start1 lies off the grid");
  if (!c.grid.contains(c.start2)) s.fail("start2", "start2 lies off the grid");
  if (c.start1 == c.start2) s.fail("start2", "searchers must start on different cells");
  if (s.has("source")) {
    const Json& v = s.get("source");
    if (v.is_string()) {
      if (v != "random") s.fail("source", "expected \"random\" or a cell [x, y]");
      o.random_source = true;
    } else {
      c.source = s.cell("source");
      if (!c.grid.contains(c.source)) s.fail("source", "source lies off the grid");
      o.random_source = false;
    }
  }
  c.a = s.number("a", c.a);
  if (!(c.a >= 0.0 && c.a < 1.0)) s.fail("a", "a must lie in [0, 1)");
  c.radius = s.number("d", c.radius);
  if (!(c.radius > 0.0 && c.radius < 0.5)) s.fail("d", "d must lie in (0, 0.5)");
  const long long steps = s.integer("max_steps", c.max_steps);
  if (steps < 1 || steps > 1000000) s.fail("max_steps", "max_steps must lie in [1, 1000000]");
  c.max_steps = static_cast<int>(steps);
  const std::string m = s.choice("modes", "cooperative", {"cooperative", "independent", "both"});
  o.modes = m == "both" ? ModeSet::Both : m == "independent" ? ModeSet::Independent
                                                             : ModeSet::Cooperative;
  if (s.has("seed") && s.has("seeds")) s.fail("seeds", "give either seed or seeds, not both");
  if (s.has("seed")) {
    const long long v = s.integer("seed");
    if (v < 0) s.fail("seed", "seed must be non-negative");
    o.first_seed = static_cast<std::uint64_t>(v);
    o.seed_count = 1;
  }
  if (s.has("seeds")) {
    const Section r = s.sub("seeds");
    r.allow({"first", "count"});
    const long long first = r.integer("first");
    const long long count = r.integer("count");
    if (first < 0) r.fail("first", "first seed must be non-negative");
    if (count < 1 || count > 1000000) r.fail("count", "count must lie in [1, 1000000]");
    o.first_seed = static_cast<std::uint64_t>(first);
    o.seed_count = static_cast<std::uint64_t>(count);
  }
  o.traces = s.boolean("traces", o.traces);
  c.mode = o.modes == ModeSet::Independent ? engine::Mode::Independent : engine::Mode::Cooperative;
}

}  // namespace detail

inline Scenario parse_scenario(const std::string& text, const std::string& name = "scenario") {
  const Document doc(name, text);
  const Section root(doc, doc.root(), "");
  root.allow({"model", "one_d", "two_d", "simulate", "output"});
  Scenario sc;
  const std::string model = root.choice("model", "", {"one_d", "two_d", "simulate"});
  sc.model = model == "one_d" ? ModelKind::OneD : model == "two_d" ? ModelKind::TwoD
                                                                    : ModelKind::Simulate;
  for (const char* section : {"one_d", "two_d", "simulate"})
    if (root.has(section) && model != section)
      root.fail(section, std::string("section '") + section + "' does not apply to model " + model);
  if (!root.has(model.c_str())) root.fail("model", "missing section '" + model + "'");
  const Section body = root.sub(model.c_str());
  switch (sc.model) {
    case ModelKind::OneD: detail::read_one_d(body, sc.one_d); break;
    case ModelKind::TwoD: detail::read_two_d(body, sc.two_d); break;
    case ModelKind::Simulate: detail::read_simulate(body, sc.simulate); break;
  }
  if (root.has("output")) {
    const Section out = root.sub("output");
    out.allow({"dir"});
    sc.out_dir = out.string("dir");
  }
  return sc;
}

// ---------------------------------------------------------------------------
// Scenario echo. The output parses back to an equal scenario; the output
// directory is left out so that files written elsewhere stay identical.

inline Json cell_json(Cell c) { return Json::array({c.x, c.y}); }

inline Json axis_json(const AxisSpec& a) {
  if (a.explicit_values) return Json(a.values);
  return Json{{"from", a.from}, {"to", a.to}, {"count", a.count}};
}

inline Json simulate_json(const SimulateScenario& s) {
  const auto& c = s.base;
  Json j;
  j["grid"] = Json::array({c.grid.nx, c.grid.ny});
  j["start1"] = cell_json(c.start1);
  j["start2"] = cell_json(c.start2);
  j["source"] = s.random_source ? Json("random") : cell_json(c.source);
  j["a"] = c.a;
  j["d"] = c.radius;
  j["max_steps"] = c.max_steps;
  j["modes"] = to_string(s.modes);
  if (s.seed_count == 1)
    j["seed"] = s.first_seed;
  else
    j["seeds"] = Json{{"first", s.first_seed}, {"count", s.seed_count}};
  if (s.traces) j["traces"] = true;
  return j;
}

inline Json scenario_json(const Scenario& sc) {
  Json j;
  j["model"] = to_string(sc.model);
  switch (sc.model) {
    case ModelKind::OneD: {
      const auto& o = sc.one_d;
      j["one_d"] = Json{{"r2", o.r2},
                        {"priors", o.priors},
                        {"r1", axis_json(o.r1)},
                        {"a", axis_json(o.a)},
                        {"quadrature", o.quadrature}};
      break;
    }
    case ModelKind::TwoD: {
      const auto& g = sc.two_d.geometry;
      j["two_d"] = Json{{"grid", Json::array({g.grid.nx, g.grid.ny})},
                        {"r2", Json::array({static_cast<int>(g.r2.x), static_cast<int>(g.r2.y)})},
                        {"prior_peak", Json::array({g.prior_peak.x, g.prior_peak.y})},
                        {"sigma", g.sigma},
                        {"d", g.radius},
                        {"a", sc.two_d.a},
                        {"exclude_occupied", g.exclude_occupied}};
      break;
    }
    case ModelKind::Simulate: j["simulate"] = simulate_json(sc.simulate); break;
  }
  return j;
}

// Scenario that reproduces exactly one run: fixed source and seed, one mode.
inline Scenario single_run_scenario(const engine::SearchConfig& cfg) {
  Scenario sc;
  sc.model = ModelKind::Simulate;
  sc.simulate.base = cfg;
  sc.simulate.random_source = false;
  sc.simulate.first_seed = cfg.seed;
  sc.simulate.seed_count = 1;
  sc.simulate.modes =
      cfg.mode == engine::Mode::Cooperative ? ModeSet::Cooperative : ModeSet::Independent;
  return sc;
}

// ---------------------------------------------------------------------------
// Field CSV

inline std::string field_csv(const GridField& f, const std::string& command, const Json& echo,
                             const std::string& value_name = "R") {
  if (!f.consistent()) throw ValidationError("field_csv: inconsistent field");
  std::ostringstream os;
  os << "# tool: " << kToolName << ' ' << kToolVersion << '\n';
  os << "# command: " << command << '\n';
  os << "# scenario: " << echo.dump() << '\n';
  os << "# rows: " << f.axis1_name << " major, " << f.axis1.size() << " x " << f.axis2.size()
     << '\n';
  os << "# value: " << value_name << " in bits\n";
  for (const auto& [k, v] : f.metadata) os << "# " << k << ": " << v << '\n';
  os << f.axis1_name << ',' << f.axis2_name << ',' << value_name << '\n';
  for (std::size_t i = 0; i < f.axis1.size(); ++i)
    for (std::size_t j = 0; j < f.axis2.size(); ++j)
      os << format_double(f.axis1[i]) << ',' << format_double(f.axis2[j]) << ','
         << format_double(f.at(i, j)) << '\n';
  return os.str();
}

// Reads a field CSV back. Axis values are recovered from the rows, which must
// form a complete axis1-major grid.
inline GridField read_field_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::map<std::string, std::string> meta;
  std::vector<std::string> header;
  std::vector<std::array<double, 3>> rows;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw ValidationError("field csv:" + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(": ");
      if (colon != std::string::npos && colon > 2) meta[line.substr(2, colon - 2)] = line.substr(colon + 2);
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    if (cells.size() != 3) fail("expected 3 columns");
    if (header.empty()) {
      header = cells;
      continue;
    }
    std::array<double, 3> r{};
    for (std::size_t k = 0; k < 3; ++k) {
      const char* b = cells[k].data();
      const char* e = b + cells[k].size();
      const auto res = std::from_chars(b, e, r[k]);
      if (res.ec != std::errc() || res.ptr != e) fail("not a number: '" + cells[k] + "'");
    }
    rows.push_back(r);
  }
  if (header.empty() || rows.empty()) fail("no data rows");
  std::vector<double> ax1, ax2;
  for (const auto& r : rows) {
    if (ax1.empty() || ax1.back() != r[0]) ax1.push_back(r[0]);
    if (ax1.size() == 1) ax2.push_back(r[1]);
  }
  if (rows.size() != ax1.size() * ax2.size()) fail("rows do not form a complete grid");
  GridField f(header[0], ax1, header[1], ax2);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i][0] != ax1[i / ax2.size()] || rows[i][1] != ax2[i % ax2.size()])
      fail("rows are not in axis1-major order");
    f.values[i] = rows[i][2];
  }
  f.metadata = std::move(meta);
  return f;
}

// r1 with the closed-form and numeric critical a; "nan" where undefined.
inline std::string critical_csv(const std::vector<double>& r1, const model1d::CriticalCurve& closed,
                                const model1d::CriticalCurve& numeric, const std::string& prior,
                                const Json& echo) {
  auto lookup = [](const model1d::CriticalCurve& c) {
    std::map<double, double> m;
    for (const auto& [r, a] : c.samples) m[r] = a;
    return m;
  };
  const auto cl = lookup(closed);
  const auto nu = lookup(numeric);
  auto cell = [](const std::map<double, double>& m, double r) {
    const auto it = m.find(r);
    return it == m.end() ? std::string("nan") : format_double(it->second);
  };
  std::ostringstream os;
  os << "# tool: " << kToolName << ' ' << kToolVersion << '\n';
  os << "# command: field1d\n";
  os << "# scenario: " << echo.dump() << '\n';
  os << "# prior: " << prior << '\n';
  os << "# r2: " << format_double(closed.r2) << '\n';
  os << "# a_c_closed: closed form, natural log; nan where it is undefined\n";
  os << "# a_c_numeric: root of R(a) = 0 on (0.001, 0.999); nan without a sign change\n";
  os << "r1,a_c_closed,a_c_numeric\n";
  for (double r : r1) os << format_double(r) << ',' << cell(cl, r) << ',' << cell(nu, r) << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Traces and summaries

inline Json step_json(const engine::StepRecord& s) {
  Json j;
  j["t"] = s.t;
  j["r1"] = cell_json(s.r1);
  j["r2"] = cell_json(s.r2);
  j["h1"] = s.pair.h1;
  j["h2"] = s.pair.h2;
  j["entropy"] = s.entropy;
  j["expected_dS"] = std::isnan(s.expected_dS) ? Json(nullptr) : Json(s.expected_dS);
  return j;
}

inline Json header_json() { return Json{{"tool", kToolName}, {"version", kToolVersion}}; }

inline Json trace_json(const engine::SearchTrace& tr) {
  Json j = header_json();
  j["config"] = scenario_json(single_run_scenario(tr.config));
  j["mode"] = "cooperative";
  j["source"] = cell_json(tr.config.source);
  j["found"] = tr.found;
  j["steps_to_find"] = tr.found ? Json(tr.found_step) : Json(nullptr);
  Json steps = Json::array();
  for (const auto& s : tr.steps) steps.push_back(step_json(s));
  j["steps"] = std::move(steps);
  return j;
}

// The independent baseline keeps one record list per searcher: positions and
// detections are shared, entropy and expected change are private.
inline Json trace_json(const engine::IndependentResult& r) {
  Json j = header_json();
  auto cfg = r.searcher1.config;
  cfg.mode = engine::Mode::Independent;
  j["config"] = scenario_json(single_run_scenario(cfg));
  j["mode"] = "independent";
  j["source"] = cell_json(cfg.source);
  j["found"] = r.found;
  j["steps_to_find"] = r.found ? Json(r.found_step) : Json(nullptr);
  Json searchers = Json::array();
  for (const auto* tr : {&r.searcher1, &r.searcher2}) {
    Json steps = Json::array();
    for (const auto& s : tr->steps) steps.push_back(step_json(s));
    searchers.push_back(Json{{"steps", std::move(steps)}});
  }
  j["searchers"] = std::move(searchers);
  return j;
}

inline Json summary_json(const engine::BatchSummary& s) {
  Json steps = Json::array();
  for (int v : s.steps) steps.push_back(v >= 0 ? Json(v) : Json(nullptr));
  return Json{{"runs", s.runs},
              {"successes", s.successes},
              {"success_rate", s.success_rate()},
              {"mean_steps", s.mean_steps},
              {"median_steps", s.median_steps},
              {"steps", std::move(steps)}};
}

// ---------------------------------------------------------------------------
// Verify table

inline std::string verify_table(const std::vector<oracle::OracleReport>& reports) {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-66s %-5s %-24s %-24s %-10s %s\n", "check", "pass", "value",
                "reference", "tolerance", "samples");
  os << buf;
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof buf, "%-66s %-5s %-24s %-24s %-10s %zu\n", r.quantity.c_str(),
                  r.pass ? "PASS" : "FAIL", format_double(r.value).c_str(),
                  format_double(r.reference).c_str(), short_double(r.tolerance).c_str(), r.samples);
    os << buf;
  }
  return os.str();
}

}  // namespace coopsearch::io
