#pragma once

// Differential checks of the main code paths against the oracles, at pinned
// sizes. Each check returns one aggregated OracleReport.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "coopsearch/engine.hpp"
#include "coopsearch/info_core.hpp"
#include "coopsearch/model_1d.hpp"
#include "coopsearch/model_2d.hpp"
#include "coopsearch/oracle.hpp"
#include "coopsearch/rng.hpp"

namespace coopsearch::verify {

using DecomposeFn = std::function<model2d::AngularDecomposition(
    Point, const model2d::DiskSearcher&, const model2d::DiskSearcher&)>;

struct GeometryCase {
  Point source;
  model2d::DiskSearcher s1;
  model2d::DiskSearcher s2;
};

// Random non-overlapping disks in a 10 x 10 box. One configuration in twenty
// puts the source on s1's center, and sources inside a disk occur naturally.
inline GeometryCase random_geometry(Rng& rng) {
  for (;;) {
    GeometryCase g;
    g.s1 = {{10.0 * uniform01(rng), 10.0 * uniform01(rng)}, 0.1 + 0.4 * uniform01(rng)};
    g.s2 = {{10.0 * uniform01(rng), 10.0 * uniform01(rng)}, 0.1 + 0.4 * uniform01(rng)};
    if (distance(g.s1.center, g.s2.center) <= g.s1.radius + g.s2.radius) continue;
    g.source = uniform01(rng) < 0.05 ? g.s1.center
                                     : Point{10.0 * uniform01(rng), 10.0 * uniform01(rng)};
    return g;
  }
}

struct GeometryAgreement {
  double worst_z = 0.0;        // largest |exact - mc| / sigma over cases with sigma > 0
  double worst_exact = 0.0;    // largest |exact - mc| over cases with sigma == 0
  std::size_t violations = 0;  // comparisons outside 3 sigma
  std::size_t comparisons = 0;
};

// sigma = sqrt(p (1 - p) / n) with p the exact fraction under test.
inline void compare_fractions(const model2d::AngularDecomposition& exact,
                              const oracle::AngularFractions& mc, GeometryAgreement& acc) {
  for (std::size_t c = 0; c < oracle::kCases; ++c) {
    const double p = exact.delta[c] / model2d::kTwoPi;
    const double diff = std::abs(p - mc.fraction[c]);
    const double sigma = std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(mc.samples));
    ++acc.comparisons;
    if (sigma > 0.0) {
      acc.worst_z = std::max(acc.worst_z, diff / sigma);
      if (diff > 3.0 * sigma) ++acc.violations;
    } else {
      acc.worst_exact = std::max(acc.worst_exact, diff);
      if (diff > 0.0) ++acc.violations;
    }
  }
}

inline GeometryAgreement geometry_agreement(std::size_t configs, std::size_t rays,
                                            std::uint64_t seed, const DecomposeFn& decompose,
                                            unsigned workers = 1) {
  std::vector<GeometryAgreement> parts(configs);
  parallel_for(configs, workers, [&](std::size_t i) {
    Rng rng = make_stream(seed + i, Stream::Oracle);
    const auto g = random_geometry(rng);
    const auto exact = decompose(g.source, g.s1, g.s2);
    const auto mc = oracle::mc_angular_fraction(g.source, {g.s1.center, g.s1.radius},
                                                {g.s2.center, g.s2.radius}, rays, rng);
    compare_fractions(exact, mc, parts[i]);
  });
  GeometryAgreement total;
  for (const auto& p : parts) {
    total.worst_z = std::max(total.worst_z, p.worst_z);
    total.worst_exact = std::max(total.worst_exact, p.worst_exact);
    total.violations += p.violations;
    total.comparisons += p.comparisons;
  }
  return total;
}

struct VerifyOptions {
  std::uint64_t seed = 1234;
  std::size_t geometry_configs = 200;
  std::size_t geometry_rays = 10000;
  std::size_t geometry_large_configs = 4;
  std::size_t geometry_large_rays = 1000000;
  std::size_t random_tables = 100;
  std::size_t planner_posteriors = 100;
  std::size_t simulator_samples = 100000;
  unsigned workers = 1;
};

inline oracle::OracleReport check_geometry(const VerifyOptions& o, const DecomposeFn& decompose) {
  auto small = geometry_agreement(o.geometry_configs, o.geometry_rays, o.seed, decompose, o.workers);
  const auto large = geometry_agreement(o.geometry_large_configs, o.geometry_large_rays,
                                        o.seed + 1000003, decompose, o.workers);
  small.worst_z = std::max(small.worst_z, large.worst_z);
  small.violations += large.violations;
  small.comparisons += large.comparisons;
  return {"angular fractions vs ray casting (worst |z|)", 0.0, small.worst_z, 3.0,
          small.violations == 0 && small.worst_exact == 0.0,
          o.geometry_configs * o.geometry_rays + o.geometry_large_configs * o.geometry_large_rays};
}

inline std::vector<double> random_simplex(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  double total = 0.0;
  for (double& x : v) {
    x = -std::log(1.0 - uniform01(rng));
    total += x;
  }
  for (double& x : v) x /= total;
  return v;
}

inline oracle::OracleReport check_redundancy_tables(const VerifyOptions& o) {
  Rng rng = make_stream(o.seed, Stream::Oracle);
  double worst = 0.0;
  for (std::size_t t = 0; t < o.random_tables; ++t) {
    auto p = random_simplex(rng, 2 * 2 * 8);
    const double main = info::redundancy(info::JointTable3(2, 2, 8, p));
    worst = std::max(worst, std::abs(main - oracle::direct_R(2, 2, 8, p)));
  }
  return {"redundancy vs direct summation, random 2x2x8 tables (max |diff|)", 0.0, worst, 1e-10,
          worst <= 1e-10, 0};
}

inline oracle::OracleReport check_model_R(const VerifyOptions&) {
  double worst = 0.0;
  const auto prior = model1d::Prior1D::gaussian_at_third();
  for (double r1 : {0.05, 0.3, 0.6, 0.9})
    for (double a : {0.1, 0.5, 0.9}) {
      const auto j = model1d::build_joint(r1, 2.0 / 3.0, CaptureProbability(a), prior, 201);
      const std::vector<double> raw(j.probs().begin(), j.probs().end());
      worst = std::max(worst, std::abs(info::redundancy(j) -
                                       oracle::direct_R(2, 2, j.n3(), raw)));
    }
  const model2d::Scenario2D sc;
  const auto prior2 = model2d::gaussian_prior_2d(sc.grid, sc.prior_peak, sc.sigma);
  for (Point r1 : {Point{0, 0}, Point{2, 2}, Point{5, 2}, Point{6, 6}})
    for (double a : {0.25, 0.75}) {
      const auto j = model2d::build_joint_2d(r1, sc.r2, CaptureProbability(a), sc.radius, prior2,
                                             sc.grid);
      const std::vector<double> raw(j.probs().begin(), j.probs().end());
      worst = std::max(worst, std::abs(info::redundancy(j) -
                                       oracle::direct_R(2, 2, j.n3(), raw)));
    }
  return {"model R (1-D and 2-D) vs direct summation (max |diff|)", 0.0, worst, 1e-10,
          worst <= 1e-10, 0};
}

// A random posterior with a few exact zeros, as after visited cells are ruled out.
inline engine::Posterior random_posterior(Rng& rng, const Grid& g) {
  engine::Posterior post{g, random_simplex(rng, g.size()), 0};
  const std::size_t zeros = static_cast<std::size_t>(uniform01(rng) * 3.0);
  for (std::size_t z = 0; z < zeros; ++z)
    post.probs[std::min(g.size() - 1, static_cast<std::size_t>(uniform01(rng) * g.size()))] = 0.0;
  double total = 0.0;
  for (double p : post.probs) total += p;
  for (double& p : post.probs) p /= total;
  return post;
}

struct PlannerAgreement {
  double worst_diff = 0.0;
  double worst_stay = -1e300;  // max expected dS of the stay-stay candidate
};

inline PlannerAgreement planner_agreement(std::size_t posteriors, std::uint64_t seed) {
  Rng rng = make_stream(seed, Stream::Oracle);
  PlannerAgreement out;
  for (std::size_t t = 0; t < posteriors; ++t) {
    const Grid g = t % 2 ? Grid{5, 5} : Grid{4, 4};
    const auto post = random_posterior(rng, g);
    const double a = 0.05 + 0.9 * uniform01(rng);
    Cell r1{}, r2{};
    do {
      r1 = g.cell(static_cast<std::size_t>(uniform01(rng) * g.size()));
      r2 = g.cell(static_cast<std::size_t>(uniform01(rng) * g.size()));
    } while (r1 == r2);
    const engine::SearcherTeam team{r1, r2, 0.45, a};
    for (const auto& [c1, c2] : engine::enumerate_joint_moves(team, g)) {
      const auto field = engine::likelihood_field(g, c1, c2, team.radius, team.a);
      const double main = engine::expected_delta_S(post, c1, c2, field);
      std::vector<std::array<double, 4>> lik(field.begin(), field.end());
      const double ref = oracle::exhaustive_expected_dS(post.probs, lik, {g.index(c1), g.index(c2)});
      out.worst_diff = std::max(out.worst_diff, std::abs(main - ref));
      if (c1 == r1 && c2 == r2) out.worst_stay = std::max(out.worst_stay, main);
    }
  }
  return out;
}

inline std::vector<oracle::OracleReport> check_planner(const VerifyOptions& o) {
  const auto p = planner_agreement(o.planner_posteriors, o.seed);
  return {{"expected dS vs exhaustive summation (max |diff|)", 0.0, p.worst_diff, 1e-12,
           p.worst_diff <= 1e-12, 0},
          {"stay-stay expected dS (max)", 0.0, p.worst_stay, 1e-12, p.worst_stay <= 1e-12, 0}};
}

// Empirical detection frequencies of the simulator vs the superposed likelihood.
inline oracle::OracleReport check_simulator(const VerifyOptions& o) {
  const Grid g{7, 7};
  const std::array<std::array<Cell, 3>, 3> setups{{{Cell{3, 3}, Cell{1, 3}, Cell{5, 3}},
                                                  {Cell{2, 2}, Cell{3, 3}, Cell{5, 5}},
                                                  {Cell{0, 6}, Cell{1, 5}, Cell{6, 0}}}};
  double worst_z = 0.0;
  std::size_t violations = 0;
  Rng emission = make_stream(o.seed, Stream::CoopEmission);
  Rng capture = make_stream(o.seed, Stream::CoopCapture);
  for (const auto& s : setups) {
    const engine::SearcherTeam team{s[1], s[2], 0.45, 0.6};
    std::array<std::size_t, 4> counts{};
    for (std::size_t i = 0; i < o.simulator_samples; ++i)
      ++counts[engine::sample_measurement(s[0], team, engine::sample_emission(emission), capture)
                   .index()];
    const auto lik = engine::likelihood_field(g, team.r1, team.r2, team.radius, team.a)[g.index(s[0])];
    for (std::size_t k = 0; k < 4; ++k) {
      const double n = static_cast<double>(o.simulator_samples);
      const double sigma = std::sqrt(lik[k] * (1.0 - lik[k]) / n);
      const double diff = std::abs(static_cast<double>(counts[k]) / n - lik[k]);
      if (sigma > 0.0) worst_z = std::max(worst_z, diff / sigma);
      if (sigma > 0.0 ? diff > 3.0 * sigma : diff > 0.0) ++violations;
    }
  }
  return {"simulated detections vs superposed likelihood (worst |z|)", 0.0, worst_z, 3.0,
          violations == 0, setups.size() * o.simulator_samples};
}

inline std::vector<oracle::OracleReport> run_verify(
    const VerifyOptions& o = {}, const DecomposeFn& decompose = model2d::decompose_angles) {
  std::vector<oracle::OracleReport> out;
  out.push_back(check_geometry(o, decompose));
  out.push_back(check_redundancy_tables(o));
  out.push_back(check_model_R(o));
  for (auto& r : check_planner(o)) out.push_back(r);
  out.push_back(check_simulator(o));
  return out;
}

}  // namespace coopsearch::verify
