#pragma once

// Two-searcher infotaxis on a grid. Each step the source emits a particle pair,
// the searchers measure, fold the measurement into a shared posterior over the
// source cell and then jointly take the move with the most negative expected
// entropy change.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coopsearch/errors.hpp"
#include "coopsearch/info_core.hpp"
#include "coopsearch/model_2d.hpp"
#include "coopsearch/rng.hpp"
#include "coopsearch/types.hpp"

namespace coopsearch::engine {

struct Posterior {
  Grid grid;
  std::vector<double> probs;
  int t = 0;

  static Posterior uniform(const Grid& g) {
    return {g, std::vector<double>(g.size(), 1.0 / static_cast<double>(g.size())), 0};
  }
  double at(Cell c) const { return probs[grid.index(c)]; }
};

// Searchers are disks of radius < 0.5 centered on distinct cells, so disks
// never overlap. a may be 0 here (blind sensors), unlike CaptureProbability.
struct SearcherTeam {
  Cell r1;
  Cell r2;
  double radius = 0.45;
  double a = 0.5;

  void validate(const Grid& g) const {
    if (!g.contains(r1) || !g.contains(r2)) throw ValidationError("searcher off grid");
    if (r1 == r2) throw ValidationError("searchers share a cell");
    if (!(radius > 0.0 && radius < 0.5)) throw ValidationError("radius must lie in (0, 0.5)");
    if (!(a >= 0.0 && a < 1.0)) throw ValidationError("a must lie in [0, 1)");
  }
};

struct EmissionEvent {
  double theta;  // direction of particle A; particle B leaves at theta + pi
};

struct Measurement {
  HitPair pair;
  Cell r1;
  Cell r2;
  int t = 0;
};

enum class Mode { Cooperative, Independent };

inline const char* to_string(Mode m) {
  return m == Mode::Cooperative ? "cooperative" : "independent";
}

struct SearchConfig {
  Grid grid{16, 16};
  Cell source{8, 8};
  Cell start1{0, 0};
  Cell start2{15, 15};
  double a = 0.5;
  double radius = 0.45;
  std::uint64_t seed = 0;
  int max_steps = 600;
  Mode mode = Mode::Cooperative;

  void validate() const {
    if (!grid.contains(source)) throw ValidationError("source off grid");
    if (max_steps < 1) throw ValidationError("max_steps must be >= 1");
    SearcherTeam{start1, start2, radius, a}.validate(grid);
  }
};

struct StepRecord {
  int t = 0;
  Cell r1;
  Cell r2;
  HitPair pair;
  double entropy = 0.0;  // posterior entropy before this step's measurement
  // Expected entropy change of the move taken; NaN on the step that finds the source.
  double expected_dS = std::numeric_limits<double>::quiet_NaN();
};

struct SearchTrace {
  SearchConfig config;
  std::vector<StepRecord> steps;
  bool found = false;
  int found_step = -1;  // step index of discovery, -1 when exhausted
};

// ---------------------------------------------------------------------------
// Emission and measurement

inline EmissionEvent sample_emission(Rng& rng) {
  return {model2d::kTwoPi * (1.0 - uniform01(rng))};
}

inline model2d::DiskSearcher disk(Cell c, double radius) { return {c.center(), radius}; }

// Detections for one emission, absorbed by whichever searcher a particle meets first.
inline HitPair sample_measurement(Cell source, const SearcherTeam& team, EmissionEvent ev,
                                  Rng& capture) {
  using model2d::AngularCase;
  const model2d::AxisGeometry geo(source.center(), disk(team.r1, team.radius),
                                  disk(team.r2, team.radius));
  HitPair out;
  switch (geo.classify(ev.theta)) {
    case AngularCase::NoneHit: break;
    case AngularCase::S1Only: out.h1 = bernoulli(capture, team.a); break;
    case AngularCase::S2Only: out.h2 = bernoulli(capture, team.a); break;
    case AngularCase::Between:
      out.h1 = bernoulli(capture, team.a);
      out.h2 = bernoulli(capture, team.a);
      break;
    case AngularCase::SameSideS1Near:
      out.h1 = bernoulli(capture, team.a);
      if (!out.h1) out.h2 = bernoulli(capture, team.a);
      break;
    case AngularCase::SameSideS2Near:
      out.h2 = bernoulli(capture, team.a);
      if (!out.h2) out.h1 = bernoulli(capture, team.a);
      break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Likelihood fields

// P(h1, h2 | r0) for every grid cell with the searchers at (r1, r2).
inline std::vector<PairLikelihood> likelihood_field(const Grid& grid, Cell r1, Cell r2,
                                                    double radius, double a) {
  const auto s1 = disk(r1, radius);
  const auto s2 = disk(r2, radius);
  std::vector<PairLikelihood> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    out[i] = model2d::detail::mixture(model2d::decompose_angles(grid.cell(i).center(), s1, s2), a);
  return out;
}

// Single-searcher detection model, blind to the other searcher:
// P(h = 1 | r0) = a * (fraction of axes with a particle crossing the disk).
inline std::vector<double> single_hit_field(const Grid& grid, Cell r, double radius, double a) {
  const auto s = disk(r, radius);
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double alpha = model2d::subtended_halfangle(grid.cell(i).center(), s);
    out[i] = a * std::min(1.0, 2.0 * alpha / std::numbers::pi);
  }
  return out;
}

// Bounded memo of likelihood fields keyed by searcher cells.
class LikelihoodCache {
 public:
  LikelihoodCache(Grid grid, double radius, double a) : grid_(grid), radius_(radius), a_(a) {}

  const std::vector<PairLikelihood>& pair_field(Cell r1, Cell r2) {
    const auto key = std::make_pair(grid_.index(r1), grid_.index(r2));
    if (auto it = pairs_.find(key); it != pairs_.end()) return it->second;
    if (pairs_.size() >= kCapacity) pairs_.clear();
    return pairs_.emplace(key, likelihood_field(grid_, r1, r2, radius_, a_)).first->second;
  }

  const std::vector<double>& single_field(Cell r) {
    const auto key = grid_.index(r);
    if (auto it = singles_.find(key); it != singles_.end()) return it->second;
    return singles_.emplace(key, single_hit_field(grid_, r, radius_, a_)).first->second;
  }

 private:
  static constexpr std::size_t kCapacity = 512;
  Grid grid_;
  double radius_;
  double a_;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<PairLikelihood>> pairs_;
  std::map<std::size_t, std::vector<double>> singles_;
};

// ---------------------------------------------------------------------------
// Posterior updates

inline double posterior_entropy(const Posterior& post) {
  return info::entropy(post.probs, info::kExactTolerance);
}

namespace detail {

template <class LikelihoodAt>
Posterior reweight(const Posterior& post, LikelihoodAt&& lik, const char* context) {
  Posterior next{post.grid, std::vector<double>(post.probs.size()), post.t + 1};
  double total = 0.0;
  for (std::size_t i = 0; i < next.probs.size(); ++i) {
    next.probs[i] = post.probs[i] * lik(i);
    total += next.probs[i];
  }
  if (!(total > 0.0))
    throw InconsistencyError(std::string(context) +
                             ": measurement has zero probability under the current posterior");
  for (double& p : next.probs) p /= total;
  return next;
}

}  // namespace detail

// P(r0 | m) proportional to P(r0) P(m | r0).
inline Posterior bayes_update(const Posterior& post, const Measurement& m,
                              const SearcherTeam& team) {
  const auto field = likelihood_field(post.grid, m.r1, m.r2, team.radius, team.a);
  return detail::reweight(post, [&](std::size_t i) { return field[i][m.pair.index()]; },
                          "bayes_update");
}

inline Posterior bayes_update(const Posterior& post, HitPair pair,
                              const std::vector<PairLikelihood>& field) {
  return detail::reweight(post, [&](std::size_t i) { return field[i][pair.index()]; },
                          "bayes_update");
}

// Assimilates "the source is not in these cells".
inline Posterior exclude_cells(const Posterior& post, std::initializer_list<Cell> cells) {
  Posterior next = post;
  double total = 0.0;
  for (Cell c : cells) next.probs[post.grid.index(c)] = 0.0;
  for (double p : next.probs) total += p;
  if (!(total > 0.0)) throw InconsistencyError("exclude_cells: no posterior mass left");
  for (double& p : next.probs) p /= total;
  return next;
}

// ---------------------------------------------------------------------------
// Planning

// Expected entropy change for the searchers standing at (r1, r2) next step:
//   -[P(r1) + P(r2)] S  +  [1 - P(r1) - P(r2)] * sum_h w_h (S_h - S)
// with w_h the predictive probability of h and S_h the entropy after updating on h.
inline double expected_delta_S(const Posterior& post, Cell r1, Cell r2,
                               const std::vector<PairLikelihood>& field) {
  const double S = posterior_entropy(post);
  const double p_find = post.at(r1) + post.at(r2);
  const std::size_t n = post.probs.size();
  std::array<double, 4> w{};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < 4; ++k) w[k] += post.probs[i] * field[i][k];
  double expected = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    if (!(w[k] > 0.0)) continue;
    double Sk = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double q = post.probs[i] * field[i][k] / w[k];
      if (q > 0.0) Sk -= q * std::log2(q);
    }
    expected += w[k] * (Sk - S);
  }
  return -p_find * S + (1.0 - p_find) * expected;
}

inline double expected_delta_S(const Posterior& post, Cell r1, Cell r2, const SearcherTeam& team) {
  return expected_delta_S(post, r1, r2, likelihood_field(post.grid, r1, r2, team.radius, team.a));
}

// Single searcher version over h in {0, 1}.
inline double expected_delta_S_single(const Posterior& post, Cell r,
                                      const std::vector<double>& hit) {
  const double S = posterior_entropy(post);
  const double p_find = post.at(r);
  const std::size_t n = post.probs.size();
  double w1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) w1 += post.probs[i] * hit[i];
  const double w0 = 1.0 - w1;
  double expected = 0.0;
  for (int h = 0; h < 2; ++h) {
    const double wh = h ? w1 : w0;
    if (!(wh > 0.0)) continue;
    double Sh = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double l = h ? hit[i] : 1.0 - hit[i];
      const double q = post.probs[i] * l / wh;
      if (q > 0.0) Sh -= q * std::log2(q);
    }
    expected += wh * (Sh - S);
  }
  return -p_find * S + (1.0 - p_find) * expected;
}

// Stay or one cardinal step, in lexicographic (dx, dy) order.
inline constexpr std::array<std::array<int, 2>, 5> kMoves{{{-1, 0}, {0, -1}, {0, 0}, {0, 1}, {1, 0}}};

inline std::vector<Cell> single_moves(Cell r, const Grid& grid) {
  std::vector<Cell> out;
  for (const auto& m : kMoves) {
    const Cell c{r.x + m[0], r.y + m[1]};
    if (grid.contains(c)) out.push_back(c);
  }
  return out;
}

// Joint moves in lexicographic (move1, move2) order, off-grid and shared cells removed.
inline std::vector<std::pair<Cell, Cell>> enumerate_joint_moves(const SearcherTeam& team,
                                                                const Grid& grid) {
  std::vector<std::pair<Cell, Cell>> out;
  for (Cell c1 : single_moves(team.r1, grid))
    for (Cell c2 : single_moves(team.r2, grid))
      if (c1 != c2) out.emplace_back(c1, c2);
  return out;
}

// Scores closer than this are ties.
inline constexpr double kTieTolerance = 1e-12;

// Expected Manhattan distance from the posterior mass to the nearest of the
// given cells. Breaks score ties: once the posterior is a delta every
// candidate scores 0, and without a second key the searchers would never
// walk to the remaining cell.
inline double expected_distance(const Posterior& post, std::initializer_list<Cell> cells) {
  double d = 0.0;
  for (std::size_t i = 0; i < post.probs.size(); ++i) {
    if (post.probs[i] == 0.0) continue;
    const Cell r = post.grid.cell(i);
    int best = std::numeric_limits<int>::max();
    for (Cell c : cells) best = std::min(best, std::abs(c.x - r.x) + std::abs(c.y - r.y));
    d += post.probs[i] * best;
  }
  return d;
}

struct Choice {
  std::size_t index = 0;
  double expected_dS = 0.0;
};

// Smallest score; ties go to the smaller tie key, then to the earlier index.
template <class Score, class TieKey>
Choice argmin_first(std::size_t n, Score&& score, TieKey&& tie_key) {
  std::vector<double> scores(n);
  for (std::size_t i = 0; i < n; ++i) scores[i] = score(i);
  const double best = *std::min_element(scores.begin(), scores.end());
  Choice choice{n, 0.0};
  double best_key = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (scores[i] > best + kTieTolerance) continue;
    const double key = tie_key(i);
    if (choice.index == n || key < best_key - kTieTolerance) {
      choice = {i, scores[i]};
      best_key = key;
    }
  }
  return choice;
}

inline Choice choose_move(const Posterior& post, const std::vector<std::pair<Cell, Cell>>& candidates,
                          LikelihoodCache& cache) {
  if (candidates.empty()) throw ValidationError("choose_move: no candidates");
  return argmin_first(
      candidates.size(),
      [&](std::size_t i) {
        const auto& [c1, c2] = candidates[i];
        return expected_delta_S(post, c1, c2, cache.pair_field(c1, c2));
      },
      [&](std::size_t i) {
        return expected_distance(post, {candidates[i].first, candidates[i].second});
      });
}

inline Choice choose_move(const Posterior& post, const std::vector<std::pair<Cell, Cell>>& candidates,
                          const SearcherTeam& team) {
  LikelihoodCache cache(post.grid, team.radius, team.a);
  return choose_move(post, candidates, cache);
}

// ---------------------------------------------------------------------------
// Runs

inline std::string step_context(int t, const std::string& what) {
  return "step " + std::to_string(t) + ": " + what;
}

inline SearchTrace run_search(const SearchConfig& cfg) {
  cfg.validate();
  SearchTrace trace{cfg, {}, false, -1};
  Rng emission = make_stream(cfg.seed, Stream::CoopEmission);
  Rng capture = make_stream(cfg.seed, Stream::CoopCapture);
  LikelihoodCache cache(cfg.grid, cfg.radius, cfg.a);
  SearcherTeam team{cfg.start1, cfg.start2, cfg.radius, cfg.a};
  Posterior post = Posterior::uniform(cfg.grid);

  for (int t = 0; t < cfg.max_steps; ++t) {
    StepRecord rec;
    rec.t = t;
    rec.r1 = team.r1;
    rec.r2 = team.r2;
    rec.entropy = posterior_entropy(post);
    rec.pair = sample_measurement(cfg.source, team, sample_emission(emission), capture);
    try {
      post = bayes_update(post, rec.pair, cache.pair_field(team.r1, team.r2));
    } catch (const InconsistencyError& e) {
      throw InconsistencyError(step_context(t, e.what()));
    }
    if (team.r1 == cfg.source || team.r2 == cfg.source) {
      trace.steps.push_back(rec);
      trace.found = true;
      trace.found_step = t;
      return trace;
    }
    post = exclude_cells(post, {team.r1, team.r2});
    const auto candidates = enumerate_joint_moves(team, cfg.grid);
    const Choice choice = choose_move(post, candidates, cache);
    rec.expected_dS = choice.expected_dS;
    trace.steps.push_back(rec);
    team.r1 = candidates[choice.index].first;
    team.r2 = candidates[choice.index].second;
  }
  return trace;
}

// Two searchers with private posteriors. Each updates on its own detections
// with a model that ignores the other searcher, and picks its own move. The
// searchers never share a cell: a move onto the other's current cell is
// excluded, and if both pick the same cell the second one stays.
struct IndependentResult {
  SearchTrace searcher1;
  SearchTrace searcher2;
  bool found = false;
  int found_step = -1;
};

inline IndependentResult run_independent_baseline(const SearchConfig& cfg) {
  cfg.validate();
  Rng emission = make_stream(cfg.seed, Stream::IndependentEmission);
  Rng capture = make_stream(cfg.seed, Stream::IndependentCapture);
  LikelihoodCache cache(cfg.grid, cfg.radius, cfg.a);
  SearcherTeam team{cfg.start1, cfg.start2, cfg.radius, cfg.a};
  std::array<Posterior, 2> post{Posterior::uniform(cfg.grid), Posterior::uniform(cfg.grid)};
  IndependentResult result;
  std::array<SearchTrace*, 2> traces{&result.searcher1, &result.searcher2};
  for (auto* tr : traces) tr->config = cfg;

  auto update = [&](int who, int h, Cell r) {
    const auto& hit = cache.single_field(r);
    post[who] = detail::reweight(
        post[who], [&](std::size_t i) { return h ? hit[i] : 1.0 - hit[i]; }, "bayes_update");
  };

  for (int t = 0; t < cfg.max_steps; ++t) {
    std::array<StepRecord, 2> rec;
    const HitPair pair = sample_measurement(cfg.source, team, sample_emission(emission), capture);
    for (int who = 0; who < 2; ++who) {
      rec[who].t = t;
      rec[who].r1 = team.r1;
      rec[who].r2 = team.r2;
      rec[who].pair = pair;
      rec[who].entropy = posterior_entropy(post[who]);
    }
    try {
      update(0, pair.h1, team.r1);
      update(1, pair.h2, team.r2);
    } catch (const InconsistencyError& e) {
      throw InconsistencyError(step_context(t, e.what()));
    }
    if (team.r1 == cfg.source || team.r2 == cfg.source) {
      for (int who = 0; who < 2; ++who) {
        traces[who]->steps.push_back(rec[who]);
        traces[who]->found = true;
        traces[who]->found_step = t;
      }
      result.found = true;
      result.found_step = t;
      return result;
    }
    post[0] = exclude_cells(post[0], {team.r1});
    post[1] = exclude_cells(post[1], {team.r2});

    std::array<Cell, 2> next{};
    const std::array<Cell, 2> now{team.r1, team.r2};
    for (int who = 0; who < 2; ++who) {
      std::vector<Cell> options;
      for (Cell c : single_moves(now[who], cfg.grid))
        if (c != now[1 - who]) options.push_back(c);
      const Choice ch = argmin_first(
          options.size(),
          [&](std::size_t i) {
            return expected_delta_S_single(post[who], options[i], cache.single_field(options[i]));
          },
          [&](std::size_t i) { return expected_distance(post[who], {options[i]}); });
      next[who] = options[ch.index];
      rec[who].expected_dS = ch.expected_dS;
      traces[who]->steps.push_back(rec[who]);
    }
    if (next[0] == next[1]) next[1] = now[1];
    team.r1 = next[0];
    team.r2 = next[1];
  }
  return result;
}

// Summary of a batch of runs. Steps-to-find is the number of moves made
// before discovery (found_step); exhausted runs count as max_steps in the
// mean and median so that failures are not dropped from comparisons.
struct BatchSummary {
  std::size_t runs = 0;
  std::size_t successes = 0;
  double mean_steps = 0.0;
  double median_steps = 0.0;
  std::vector<int> steps;  // per run; -1 when exhausted
  double success_rate() const {
    return runs == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(runs);
  }
};

inline BatchSummary summarize(const std::vector<int>& steps, int max_steps) {
  BatchSummary s;
  s.runs = steps.size();
  s.steps = steps;
  if (steps.empty()) return s;
  std::vector<int> censored;
  for (int v : steps) {
    if (v >= 0) ++s.successes;
    censored.push_back(v >= 0 ? v : max_steps);
  }
  double total = 0.0;
  for (int v : censored) total += v;
  s.mean_steps = total / static_cast<double>(censored.size());
  std::sort(censored.begin(), censored.end());
  const std::size_t m = censored.size() / 2;
  s.median_steps = censored.size() % 2 ? censored[m] : 0.5 * (censored[m - 1] + censored[m]);
  return s;
}

// Per-seed config for batch runs: the source cell is drawn uniformly from the
// cells not occupied at the start, using the seed's scenario stream.
inline SearchConfig seeded_config(SearchConfig base, std::uint64_t seed) {
  base.seed = seed;
  Rng rng = make_stream(seed, Stream::Scenario);
  for (;;) {
    const auto i = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(base.grid.size()));
    const Cell c = base.grid.cell(std::min(i, base.grid.size() - 1));
    if (c != base.start1 && c != base.start2) {
      base.source = c;
      return base;
    }
  }
}

}  // namespace coopsearch::engine
