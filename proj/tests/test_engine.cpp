#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "coopsearch/engine.hpp"
#include "coopsearch/oracle.hpp"

using namespace coopsearch;
using namespace coopsearch::engine;

namespace {

std::vector<std::array<double, 4>> oracle_likelihood(const Grid& g, Cell r1, Cell r2, double d,
                                                     double a) {
  std::vector<std::array<double, 4>> lik(g.size());
  const model2d::DiskSearcher s1{r1.center(), d}, s2{r2.center(), d};
  for (std::size_t i = 0; i < g.size(); ++i)
    lik[i] = model2d::superposed_table(g.cell(i).center(), s1, s2, CaptureProbability(a));
  return lik;
}

double oracle_dS(const Posterior& post, Cell r1, Cell r2, double d, double a) {
  return oracle::exhaustive_expected_dS(post.probs, oracle_likelihood(post.grid, r1, r2, d, a),
                                        {post.grid.index(r1), post.grid.index(r2)});
}

Posterior peaked(const Grid& g, Cell peak, double sharpness) {
  Posterior p = Posterior::uniform(g);
  double total = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Cell c = g.cell(i);
    const double d2 = (c.x - peak.x) * (c.x - peak.x) + (c.y - peak.y) * (c.y - peak.y);
    p.probs[i] = std::exp(-sharpness * d2);
    total += p.probs[i];
  }
  for (double& x : p.probs) x /= total;
  return p;
}

}  // namespace

TEST(SampleEmission, DeterministicAndUniform) {
  Rng a = make_stream(5, Stream::CoopEmission);
  Rng b = make_stream(5, Stream::CoopEmission);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_emission(a).theta, sample_emission(b).theta);

  Rng rng = make_stream(6, Stream::CoopEmission);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = sample_emission(rng).theta;
    ASSERT_GT(t, 0.0);
    ASSERT_LE(t, model2d::kTwoPi);
    sum += std::cos(t);
  }
  EXPECT_LE(std::abs(sum / n), 3.0 * std::sqrt(0.5 / n));
}

TEST(SampleMeasurement, MissingBothDisksDetectsNothing) {
  const SearcherTeam team{{1, 3}, {5, 3}, 0.45, 0.9};
  Rng cap = make_stream(7, Stream::CoopCapture);
  for (int i = 0; i < 1000; ++i)
    EXPECT_EQ(sample_measurement({3, 3}, team, {std::numbers::pi / 2}, cap), (HitPair{0, 0}));
}

TEST(SampleMeasurement, BetweenAxisGivesIndependentDetections) {
  const double a = 0.6;
  const SearcherTeam team{{1, 3}, {5, 3}, 0.45, a};
  Rng cap = make_stream(8, Stream::CoopCapture);
  const int n = 100000;
  int both = 0;
  for (int i = 0; i < n; ++i) both += sample_measurement({3, 3}, team, {1e-3}, cap) == HitPair{1, 1};
  const double p = a * a;
  EXPECT_LE(std::abs(static_cast<double>(both) / n - p), 3.0 * std::sqrt(p * (1 - p) / n));
}

TEST(SampleMeasurement, SingleSearcherAxisNeverFiresTheOther) {
  const SearcherTeam team{{1, 3}, {3, 6}, 0.45, 0.9};
  Rng cap = make_stream(9, Stream::CoopCapture);
  for (int i = 0; i < 10000; ++i)
    EXPECT_EQ(sample_measurement({3, 3}, team, {std::numbers::pi}, cap).h2, 0);
}

TEST(BayesUpdate, ConstantLikelihoodLeavesPosterior) {
  const Grid g{4, 4};
  const Posterior p = peaked(g, {1, 2}, 0.7);
  const std::vector<PairLikelihood> field(g.size(), PairLikelihood{0.1, 0.2, 0.3, 0.4});
  const Posterior q = bayes_update(p, HitPair{1, 0}, field);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(q.probs[i], p.probs[i], 1e-15);
  EXPECT_EQ(q.t, p.t + 1);
}

TEST(BayesUpdate, DeltaStaysDelta) {
  const Grid g{5, 5};
  Posterior p = Posterior::uniform(g);
  std::fill(p.probs.begin(), p.probs.end(), 0.0);
  p.probs[g.index({4, 4})] = 1.0;
  const SearcherTeam team{{0, 0}, {2, 2}, 0.45, 0.5};
  const Posterior q = bayes_update(p, Measurement{{0, 0}, team.r1, team.r2, 0}, team);
  EXPECT_EQ(q.probs[g.index({4, 4})], 1.0);
  EXPECT_EQ(posterior_entropy(q), 0.0);
}

TEST(BayesUpdate, RepeatedSilenceDrainsCellsNextToSearchers) {
  const Grid g{5, 5};
  const SearcherTeam team{{1, 1}, {3, 3}, 0.45, 0.7};
  Posterior p = Posterior::uniform(g);
  const std::vector<Cell> adjacent{{0, 1}, {1, 0}, {1, 2}, {2, 1}, {2, 3}, {3, 2}, {3, 4}, {4, 3}};
  for (int k = 0; k < 5; ++k) {
    const Posterior q = bayes_update(p, Measurement{{0, 0}, team.r1, team.r2, k}, team);
    for (Cell c : adjacent) EXPECT_LT(q.at(c), p.at(c)) << c.x << "," << c.y;
    double total = 0.0;
    for (double x : q.probs) total += x;
    EXPECT_NEAR(total, 1.0, 1e-12);
    p = q;
  }
}

TEST(BayesUpdate, ImpossibleMeasurementIsInconsistency) {
  const Grid g{3, 3};
  Posterior p = Posterior::uniform(g);
  const std::vector<PairLikelihood> field(g.size(), PairLikelihood{1.0, 0.0, 0.0, 0.0});
  EXPECT_THROW(bayes_update(p, HitPair{1, 1}, field), InconsistencyError);
}

TEST(PosteriorEntropy, UniformAndDelta) {
  EXPECT_NEAR(posterior_entropy(Posterior::uniform({16, 16})), 8.0, 1e-12);
  EXPECT_NEAR(posterior_entropy(Posterior::uniform({7, 7})), std::log2(49.0), 1e-12);
  Posterior d = Posterior::uniform({3, 3});
  std::fill(d.probs.begin(), d.probs.end(), 0.0);
  d.probs[4] = 1.0;
  EXPECT_EQ(posterior_entropy(d), 0.0);
}

TEST(ExpectedDeltaS, MatchesExhaustiveOracleOnFourByFour) {
  const Grid g{4, 4};
  Rng rng = make_stream(31, Stream::Oracle);
  for (int t = 0; t < 30; ++t) {
    Posterior p = Posterior::uniform(g);
    double total = 0.0;
    for (double& x : p.probs) total += (x = -std::log(1.0 - uniform01(rng)));
    for (double& x : p.probs) x /= total;
    const SearcherTeam team{{1, 1}, {2, 3}, 0.45, 0.1 + 0.8 * uniform01(rng)};
    for (const auto& [c1, c2] : enumerate_joint_moves(team, g))
      EXPECT_NEAR(expected_delta_S(p, c1, c2, team), oracle_dS(p, c1, c2, team.radius, team.a),
                  1e-12);
  }
}

TEST(ExpectedDeltaS, StayNeverExpectsToLoseInformation) {
  const Grid g{5, 5};
  Rng rng = make_stream(32, Stream::Oracle);
  for (int t = 0; t < 50; ++t) {
    Posterior p = peaked(g, {static_cast<int>(5 * uniform01(rng)), 2}, 3.0 * uniform01(rng));
    const SearcherTeam team{{0, 4}, {3, 1}, 0.45, 0.05 + 0.9 * uniform01(rng)};
    EXPECT_LE(expected_delta_S(p, team.r1, team.r2, team), 1e-12);
  }
}

TEST(ExpectedDeltaS, BlindSensorsLeaveOnlyTheFindingTerm) {
  const Grid g{5, 5};
  const Posterior p = peaked(g, {2, 2}, 0.5);
  const SearcherTeam team{{1, 2}, {3, 3}, 0.45, 1e-6};
  const double S = posterior_entropy(p);
  const double term1 = -(p.at(team.r1) + p.at(team.r2)) * S;
  EXPECT_NEAR(expected_delta_S(p, team.r1, team.r2, team), term1, 1e-5);
  EXPECT_NEAR(oracle_dS(p, team.r1, team.r2, team.radius, team.a), term1, 1e-5);
}

TEST(EnumerateJointMoves, Counts) {
  const Grid g{8, 8};
  EXPECT_EQ(enumerate_joint_moves({{2, 2}, {5, 5}, 0.45, 0.5}, g).size(), 25u);
  const auto corner = enumerate_joint_moves({{0, 0}, {5, 5}, 0.45, 0.5}, g);
  EXPECT_EQ(corner.size(), 15u);
  EXPECT_EQ(single_moves({0, 0}, g).size(), 3u);
  const auto adjacent = enumerate_joint_moves({{2, 2}, {2, 3}, 0.45, 0.5}, g);
  for (const auto& [a, b] : adjacent) EXPECT_NE(a, b);
  EXPECT_EQ(adjacent.size(), 25u - 2u);  // (2,3)-(2,3) and (2,2)-(2,2) collide
}

TEST(EnumerateJointMoves, LexicographicOrder) {
  const auto m = enumerate_joint_moves({{2, 2}, {5, 5}, 0.45, 0.5}, {8, 8});
  EXPECT_EQ(m.front(), std::make_pair(Cell{1, 2}, Cell{4, 5}));
  EXPECT_EQ(m.back(), std::make_pair(Cell{3, 2}, Cell{6, 5}));
  EXPECT_EQ(m[12], std::make_pair(Cell{2, 2}, Cell{5, 5}));
}

TEST(ChooseMove, SingleCandidate) {
  const Grid g{4, 4};
  const SearcherTeam team{{0, 0}, {3, 3}, 0.45, 0.5};
  const std::vector<std::pair<Cell, Cell>> one{{Cell{0, 1}, Cell{3, 2}}};
  EXPECT_EQ(choose_move(Posterior::uniform(g), one, team).index, 0u);
  EXPECT_THROW(choose_move(Posterior::uniform(g), {}, team), ValidationError);
}

TEST(ChooseMove, SymmetricTieGoesToTheFirstCandidate) {
  // Mirror-image candidates on a uniform posterior score identically.
  const Grid g{5, 5};
  const SearcherTeam team{{2, 0}, {2, 4}, 0.45, 0.5};
  const std::vector<std::pair<Cell, Cell>> mirrored{{Cell{1, 0}, Cell{1, 4}},
                                                     {Cell{3, 0}, Cell{3, 4}}};
  const Posterior p = Posterior::uniform(g);
  EXPECT_NEAR(expected_delta_S(p, mirrored[0].first, mirrored[0].second, team),
              expected_delta_S(p, mirrored[1].first, mirrored[1].second, team), 1e-14);
  EXPECT_EQ(choose_move(p, mirrored, team).index, 0u);
}

TEST(ChooseMove, PeakedPosteriorPullsTowardTheMass) {
  const Grid g{5, 5};
  const Posterior p = peaked(g, {3, 3}, 1.5);
  const SearcherTeam team{{2, 3}, {0, 0}, 0.45, 0.5};
  const auto cands = enumerate_joint_moves(team, g);
  const auto pick = cands[choose_move(p, cands, team).index];
  // Checked against the exhaustive summation: stepping onto the peak beats
  // every move of searcher 1 away from it.
  const double toward = oracle_dS(p, {3, 3}, pick.second, team.radius, team.a);
  const double away = oracle_dS(p, {1, 3}, pick.second, team.radius, team.a);
  EXPECT_LT(toward, away);
  EXPECT_EQ(pick.first, (Cell{3, 3}));
}

TEST(ChooseMove, DeltaPosteriorStillMovesTowardTheRemainingCell) {
  // Every score is 0 when S = 0; the distance key keeps the team moving.
  const Grid g{8, 8};
  Posterior p = Posterior::uniform(g);
  std::fill(p.probs.begin(), p.probs.end(), 0.0);
  p.probs[g.index({6, 5})] = 1.0;
  const SearcherTeam team{{0, 0}, {0, 1}, 0.45, 0.75};
  const auto cands = enumerate_joint_moves(team, g);
  const auto pick = cands[choose_move(p, cands, team).index];
  const auto dist = [](Cell a, Cell b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y); };
  EXPECT_LT(std::min(dist(pick.first, {6, 5}), dist(pick.second, {6, 5})), dist({0, 1}, {6, 5}));
}

TEST(RunSearch, SourceUnderAStartingSearcherIsFoundAtStepZero) {
  SearchConfig cfg;
  cfg.source = cfg.start2;
  const auto tr = run_search(cfg);
  EXPECT_TRUE(tr.found);
  EXPECT_EQ(tr.found_step, 0);
  ASSERT_EQ(tr.steps.size(), 1u);
  EXPECT_TRUE(std::isnan(tr.steps[0].expected_dS));
}

TEST(RunSearch, TraceInvariantsAndDeterminism) {
  SearchConfig cfg;
  cfg.grid = {10, 10};
  cfg.start2 = {9, 9};
  cfg.source = {6, 3};
  cfg.seed = 17;
  cfg.max_steps = 300;
  const auto a = run_search(cfg);
  const auto b = run_search(cfg);
  ASSERT_EQ(a.steps.size(), b.steps.size());
  EXPECT_NEAR(a.steps.front().entropy, std::log2(100.0), 1e-12);
  EXPECT_LE(a.steps.size(), static_cast<std::size_t>(cfg.max_steps));
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    EXPECT_EQ(a.steps[i].pair, b.steps[i].pair);
    EXPECT_EQ(a.steps[i].r1, b.steps[i].r1);
    EXPECT_EQ(a.steps[i].r2, b.steps[i].r2);
    EXPECT_GE(a.steps[i].entropy, 0.0);
    EXPECT_NE(a.steps[i].r1, a.steps[i].r2);
    if (!std::isnan(a.steps[i].expected_dS)) {
      EXPECT_LE(a.steps[i].expected_dS, 1e-12);
    }
    if (i > 0) {
      EXPECT_LE(std::abs(a.steps[i].r1.x - a.steps[i - 1].r1.x) +
                    std::abs(a.steps[i].r1.y - a.steps[i - 1].r1.y), 1);
    }
  }
}

TEST(RunSearch, RejectsInvalidConfigs) {
  SearchConfig cfg;
  cfg.source = {16, 0};
  EXPECT_THROW(run_search(cfg), ValidationError);
  cfg = {};
  cfg.max_steps = 0;
  EXPECT_THROW(run_search(cfg), ValidationError);
  cfg = {};
  cfg.start2 = cfg.start1;
  EXPECT_THROW(run_search(cfg), ValidationError);
  cfg = {};
  cfg.a = 1.0;
  EXPECT_THROW(run_search(cfg), ValidationError);
}

TEST(RunSearch, BlindSensorsDetectNothing) {
  SearchConfig cfg;
  cfg.grid = {6, 6};
  cfg.start2 = {5, 5};
  cfg.source = {3, 2};
  cfg.a = 0.0;
  cfg.max_steps = 80;
  const auto coop = run_search(cfg);
  for (const auto& s : coop.steps) EXPECT_EQ(s.pair, (HitPair{0, 0}));
  const auto ind = run_independent_baseline(cfg);
  for (const auto& s : ind.searcher1.steps) EXPECT_EQ(s.pair, (HitPair{0, 0}));
  // Success, if any, only by standing on the source.
  if (coop.found) {
    const auto& last = coop.steps.back();
    EXPECT_TRUE(last.r1 == cfg.source || last.r2 == cfg.source);
  }
}

TEST(IndependentBaseline, UsesItsOwnStreamsAndIsDeterministic) {
  SearchConfig cfg;
  cfg.grid = {8, 8};
  cfg.start2 = {7, 7};
  cfg.source = {5, 2};
  cfg.seed = 3;
  const auto a = run_independent_baseline(cfg);
  const auto b = run_independent_baseline(cfg);
  EXPECT_EQ(a.found_step, b.found_step);
  ASSERT_EQ(a.searcher1.steps.size(), b.searcher1.steps.size());
  for (std::size_t i = 0; i < a.searcher1.steps.size(); ++i)
    EXPECT_EQ(a.searcher1.steps[i].pair, b.searcher1.steps[i].pair);

  // The cooperative run draws from different streams, so the first emissions differ.
  Rng coop = make_stream(cfg.seed, Stream::CoopEmission);
  Rng ind = make_stream(cfg.seed, Stream::IndependentEmission);
  EXPECT_NE(sample_emission(coop).theta, sample_emission(ind).theta);
}

TEST(Summarize, CensorsExhaustedRuns) {
  const auto s = summarize({10, -1, 30, 20}, 600);
  EXPECT_EQ(s.runs, 4u);
  EXPECT_EQ(s.successes, 3u);
  EXPECT_DOUBLE_EQ(s.success_rate(), 0.75);
  EXPECT_DOUBLE_EQ(s.mean_steps, (10 + 600 + 30 + 20) / 4.0);
  EXPECT_DOUBLE_EQ(s.median_steps, 25.0);
}

TEST(SeededConfig, SourceAvoidsStartsAndIsReproducible) {
  SearchConfig base;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto c = seeded_config(base, seed);
    EXPECT_EQ(c.seed, seed);
    EXPECT_TRUE(base.grid.contains(c.source));
    EXPECT_NE(c.source, base.start1);
    EXPECT_NE(c.source, base.start2);
    EXPECT_EQ(seeded_config(base, seed).source, c.source);
  }
}
