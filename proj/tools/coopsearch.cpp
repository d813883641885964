// coopsearch: R fields, critical capture probabilities, search simulations and
// oracle checks from the command line.
//
// Exit codes: 0 success, 1 verification failure, 2 invalid input,
// 3 no root or outside the domain of a formula, 4 engine inconsistency.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "coopsearch/engine.hpp"
#include "coopsearch/errors.hpp"
#include "coopsearch/io.hpp"
#include "coopsearch/model_1d.hpp"
#include "coopsearch/model_2d.hpp"
#include "coopsearch/parallel.hpp"
#include "coopsearch/verify.hpp"

namespace fs = std::filesystem;
using namespace coopsearch;

namespace {

enum ExitCode { kOk = 0, kVerifyFailed = 1, kInvalid = 2, kDomain = 3, kInconsistent = 4 };

struct Options {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::string seeds;
  unsigned threads = 0;
  std::string out;
};

unsigned workers(const Options& o) { return o.threads == 0 ? default_workers() : o.threads; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& dir, const std::string& name, const std::string& text) {
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error(p.string() + ": write failed");
  std::cout << "wrote " << p.string() << '\n';
}

io::Scenario load(const Options& o, io::ModelKind expected) {
  if (o.scenario.empty()) throw ValidationError("--scenario is required");
  io::Scenario sc = io::parse_scenario(read_file(o.scenario), o.scenario);
  if (sc.model != expected)
    throw ValidationError(o.scenario + ": model is " + io::to_string(sc.model) +
                          ", this command needs " + io::to_string(expected));
  if (!o.out.empty()) sc.out_dir = o.out;
  return sc;
}

// "A..B" inclusive, or a single seed.
std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& s) {
  auto number = [&](const std::string& t) {
    if (t.empty() || !std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; }))
      throw ValidationError("--seeds: expected A..B or a single seed, got '" + s + "'");
    return static_cast<std::uint64_t>(std::stoull(t));
  };
  const auto dots = s.find("..");
  if (dots == std::string::npos) return {number(s), 1};
  const std::uint64_t a = number(s.substr(0, dots));
  const std::uint64_t b = number(s.substr(dots + 2));
  if (b < a) throw ValidationError("--seeds: empty range '" + s + "'");
  return {a, b - a + 1};
}

model1d::Prior1D prior_named(const std::string& name) {
  if (name == "uniform") return model1d::Prior1D::uniform();
  if (name == "gaussian") return model1d::Prior1D::gaussian_at_third();
  throw ValidationError("unknown prior '" + name + "' (uniform or gaussian)");
}

// ---------------------------------------------------------------------------

int cmd_field1d(const Options& o) {
  const io::Scenario sc = load(o, io::ModelKind::OneD);
  const auto& p = sc.one_d;
  const io::Json echo = io::scenario_json(sc);
  for (const std::string& name : p.priors) {
    const auto prior = prior_named(name);
    GridField field = model1d::sweep_R_field_1d(p.r2, p.r1.values, p.a.values, prior,
                                                p.quadrature, workers(o));
    field.metadata["r2"] = io::format_double(p.r2);
    write_file(sc.out_dir, "field_1d_" + name + ".csv", io::field_csv(field, "field1d", echo));
    const auto closed = model1d::critical_curve(model1d::CriticalCurve::Method::ClosedForm, p.r2,
                                                p.r1.values, prior, p.quadrature, workers(o));
    const auto numeric = model1d::critical_curve(model1d::CriticalCurve::Method::NumericRoot,
                                                 p.r2, p.r1.values, prior, p.quadrature,
                                                 workers(o));
    write_file(sc.out_dir, "critical_1d_" + name + ".csv",
               io::critical_csv(p.r1.values, closed, numeric, name, echo));
    std::cout << name << ": " << model1d::redundant_cells(field) << " of " << field.values.size()
              << " cells redundant (R > 0)\n";
  }
  return kOk;
}

int cmd_field2d(const Options& o) {
  const io::Scenario sc = load(o, io::ModelKind::TwoD);
  const io::Json echo = io::scenario_json(sc);
  for (double a : sc.two_d.a) {
    GridField field = model2d::sweep_R_field_2d(sc.two_d.geometry, CaptureProbability(a), workers(o));
    field.metadata["a"] = io::format_double(a);
    write_file(sc.out_dir, "field_2d_a" + io::short_double(a) + ".csv",
               io::field_csv(field, "field2d", echo));
    const auto [lo, hi] = std::minmax_element(field.values.begin(), field.values.end());
    std::cout << "a = " << io::short_double(a) << ": min R " << io::format_double(*lo)
              << ", max R " << io::format_double(*hi) << '\n';
  }
  return kOk;
}

// R is symmetric in the two positions, so both formulas are evaluated with
// the positions sorted and swapped arguments print the same bytes.
int cmd_critical_a(double r1, double r2, const std::string& prior_name, std::size_t n_quad) {
  const auto prior = prior_named(prior_name);
  for (double r : {r1, r2})
    if (!(r >= 0.0 && r <= 1.0)) throw ValidationError("positions must lie in [0, 1]");
  if (n_quad < model1d::kMinQuadrature) throw ValidationError("--quadrature must be >= 101");
  const double lo = std::min(r1, r2);
  const double hi = std::max(r1, r2);
  std::cout << "positions " << io::format_double(lo) << ' ' << io::format_double(hi) << '\n';
  std::cout << "prior " << prior_name << '\n';
  std::optional<double> closed, numeric;
  try {
    closed = model1d::critical_a_closed(hi, lo);
    std::cout << "a_c closed  " << io::format_double(*closed) << '\n';
  } catch (const DomainError& e) {
    std::cout << "a_c closed  undefined: " << e.what() << '\n';
  }
  try {
    numeric = model1d::critical_a_numeric(hi, lo, prior, n_quad);
    std::cout << "a_c numeric " << io::format_double(*numeric) << '\n';
  } catch (const NoRootError& e) {
    std::cout << "a_c numeric undefined: " << e.what() << '\n';
  }
  if (!closed || !numeric) return kDomain;
  std::cout << "difference  " << io::format_double(std::abs(*closed - *numeric)) << '\n';
  return kOk;
}

struct SeedResult {
  int coop_steps = -1;
  int indep_steps = -1;
  std::string coop_trace;
  std::string indep_trace;
};

int cmd_simulate(const Options& o) {
  io::Scenario sc = load(o, io::ModelKind::Simulate);
  auto& sim = sc.simulate;
  if (o.seed && !o.seeds.empty()) throw ValidationError("give either --seed or --seeds");
  if (o.seed) {
    sim.first_seed = *o.seed;
    sim.seed_count = 1;
  }
  if (!o.seeds.empty()) std::tie(sim.first_seed, sim.seed_count) = parse_seed_range(o.seeds);
  const bool coop = sim.modes != io::ModeSet::Independent;
  const bool indep = sim.modes != io::ModeSet::Cooperative;
  const bool batch = sim.seed_count > 1;
  const bool traces = !batch || sim.traces;

  std::vector<SeedResult> results(sim.seed_count);
  parallel_for(results.size(), workers(o), [&](std::size_t i) {
    const std::uint64_t seed = sim.first_seed + i;
    engine::SearchConfig cfg = sim.random_source ? engine::seeded_config(sim.base, seed) : sim.base;
    cfg.seed = seed;
    SeedResult& r = results[i];
    try {
      if (coop) {
        cfg.mode = engine::Mode::Cooperative;
        const auto tr = engine::run_search(cfg);
        r.coop_steps = tr.found ? tr.found_step : -1;
        if (traces) r.coop_trace = io::trace_json(tr).dump(1) + "\n";
      }
      if (indep) {
        cfg.mode = engine::Mode::Independent;
        const auto tr = engine::run_independent_baseline(cfg);
        r.indep_steps = tr.found ? tr.found_step : -1;
        if (traces) r.indep_trace = io::trace_json(tr).dump(1) + "\n";
      }
    } catch (const InconsistencyError& e) {
      throw InconsistencyError("seed " + std::to_string(seed) + ": " + e.what());
    }
  });

  for (std::size_t i = 0; traces && i < results.size(); ++i) {
    const std::string seed = std::to_string(sim.first_seed + i);
    if (coop) write_file(sc.out_dir, "trace_cooperative_seed" + seed + ".json", results[i].coop_trace);
    if (indep)
      write_file(sc.out_dir, "trace_independent_seed" + seed + ".json", results[i].indep_trace);
  }
  if (!batch) {
    const auto& r = results.front();
    auto outcome = [](int steps) {
      return steps >= 0 ? "found at step " + std::to_string(steps) : std::string("not found");
    };
    if (coop) std::cout << "cooperative: " << outcome(r.coop_steps) << '\n';
    if (indep) std::cout << "independent: " << outcome(r.indep_steps) << '\n';
    return kOk;
  }

  io::Json summary = io::header_json();
  summary["scenario"] = io::scenario_json(sc);
  auto add = [&](const char* name, int SeedResult::*field) {
    std::vector<int> steps;
    for (const auto& r : results) steps.push_back(r.*field);
    const auto s = engine::summarize(steps, sim.base.max_steps);
    summary[name] = io::summary_json(s);
    std::cout << name << ": success rate " << io::short_double(s.success_rate()) << ", mean steps "
              << io::short_double(s.mean_steps) << ", median steps "
              << io::short_double(s.median_steps) << '\n';
  };
  if (coop) add("cooperative", &SeedResult::coop_steps);
  if (indep) add("independent", &SeedResult::indep_steps);
  write_file(sc.out_dir, "summary.json", summary.dump(1) + "\n");
  return kOk;
}

int cmd_verify(const Options& o) {
  verify::VerifyOptions vo;
  if (o.seed) vo.seed = *o.seed;
  vo.workers = workers(o);
  const auto reports = verify::run_verify(vo);
  const std::string table = io::verify_table(reports);
  std::cout << table;
  if (!o.out.empty()) write_file(o.out, "verify.txt", table);
  const bool ok = std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; });
  std::cout << (ok ? "all checks passed\n" : "verification FAILED\n");
  return ok ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperative two-searcher infotaxis: synergy fields, critical a, simulations"};
  app.set_version_flag("--version", std::string(io::kToolName) + " " + io::kToolVersion);
  app.require_subcommand(1);

  Options opt;
  auto scenario_flag = [&](CLI::App* sub) {
    sub->add_option("--scenario", opt.scenario, "scenario JSON file")->required();
  };
  auto threads_flag = [&](CLI::App* sub) {
    sub->add_option("--threads", opt.threads, "worker threads, 0 for one per core");
  };
  auto out_flag = [&](CLI::App* sub) {
    sub->add_option("--out", opt.out, "output directory (overrides the scenario)");
  };

  auto* f1 = app.add_subcommand("field1d", "R over (r1, a) for fixed r2, plus critical-a curves");
  scenario_flag(f1);
  threads_flag(f1);
  out_flag(f1);

  auto* f2 = app.add_subcommand("field2d", "R over searcher-1 cells for fixed r2 on a grid");
  scenario_flag(f2);
  threads_flag(f2);
  out_flag(f2);

  double ca_r1 = 0.0, ca_r2 = 0.0;
  std::string ca_prior = "uniform";
  std::size_t ca_quad = model1d::kDefaultQuadrature;
  auto* ca = app.add_subcommand("critical-a", "closed-form and numeric critical capture probability");
  ca->add_option("--r1", ca_r1, "position of searcher 1 in [0, 1]")->required();
  ca->add_option("--r2", ca_r2, "position of searcher 2 in [0, 1]")->required();
  ca->add_option("--prior", ca_prior, "uniform or gaussian");
  ca->add_option("--quadrature", ca_quad, "quadrature nodes");

  auto* sim = app.add_subcommand("simulate", "run searches, one trace per seed or a batch summary");
  scenario_flag(sim);
  sim->add_option("--seed", opt.seed, "single seed (overrides the scenario)");
  sim->add_option("--seeds", opt.seeds, "seed range A..B (overrides the scenario)");
  threads_flag(sim);
  out_flag(sim);

  auto* ver = app.add_subcommand("verify", "differential checks against the brute-force oracles");
  ver->add_option("--seed", opt.seed, "oracle seed");
  threads_flag(ver);
  ver->add_option("--out", opt.out, "also write the table to DIR/verify.txt");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (*f1) return cmd_field1d(opt);
    if (*f2) return cmd_field2d(opt);
    if (*ca) return cmd_critical_a(ca_r1, ca_r2, ca_prior, ca_quad);
    if (*sim) return cmd_simulate(opt);
    if (*ver) return cmd_verify(opt);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const NoRootError& e) {
    std::cerr << "no root: " << e.what() << '\n';
    return kDomain;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kDomain;
  } catch (const InconsistencyError& e) {
    std::cerr << "inconsistency: " << e.what() << '\n';
    return kInconsistent;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }
  return kInvalid;
}
