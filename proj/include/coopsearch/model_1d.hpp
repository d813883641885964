#pragma once

// One-dimensional correlated-emission model. A source at r0 in [0, 1] emits two
// particles in opposite directions each step; searchers at r1 and r2 capture a
// crossing particle with probability a, and a captured particle is absorbed.
// Because capture does not depend on distance, only the ordering of source and
// searchers matters.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coopsearch/errors.hpp"
#include "coopsearch/grid_field.hpp"
#include "coopsearch/info_core.hpp"
#include "coopsearch/parallel.hpp"
#include "coopsearch/types.hpp"

namespace coopsearch::model1d {

// Orderings along the line, up to mirror image:
//   SameSideS1Near  s0 s1 s2 / s2 s1 s0   (s1 sits between the source and s2)
//   Between         s1 s0 s2 / s2 s0 s1
//   SameSideS2Near  s0 s2 s1 / s1 s2 s0
enum class Arrangement1D { SameSideS1Near, Between, SameSideS2Near };

inline const char* to_string(Arrangement1D a) {
  switch (a) {
    case Arrangement1D::SameSideS1Near: return "SameSideS1Near";
    case Arrangement1D::Between: return "Between";
    case Arrangement1D::SameSideS2Near: return "SameSideS2Near";
  }
  return "?";
}

// Coincident coordinates are ordered by index (s0 before s1 before s2), so the
// result is deterministic on the measure-zero tie set.
inline Arrangement1D classify(double r0, double r1, double r2) {
  for (double r : {r0, r1, r2})
    if (!(r >= 0.0 && r <= 1.0)) throw DomainError("classify: positions must lie in [0, 1]");
  std::array<std::pair<double, int>, 3> order{{{r0, 0}, {r1, 1}, {r2, 2}}};
  std::sort(order.begin(), order.end());
  switch (order[1].second) {
    case 0: return Arrangement1D::Between;
    case 1: return Arrangement1D::SameSideS1Near;
    default: return Arrangement1D::SameSideS2Near;
  }
}

namespace detail {

// Table entries for a raw capture probability; a = 0 is allowed here so the
// simulator can model blind sensors.
inline double hit(Arrangement1D arr, double a, HitPair pair) {
  const double b = 1.0 - a;
  switch (arr) {
    case Arrangement1D::Between:
      return (pair.h1 ? a : b) * (pair.h2 ? a : b);
    case Arrangement1D::SameSideS1Near:
      if (pair.h1 && pair.h2) return 0.0;
      if (pair.h1) return a;
      if (pair.h2) return a * b;
      return b * b;
    case Arrangement1D::SameSideS2Near:
      if (pair.h1 && pair.h2) return 0.0;
      if (pair.h2) return a;
      if (pair.h1) return a * b;
      return b * b;
  }
  return 0.0;
}

}  // namespace detail

// P(h1, h2 | r0) for the arrangement.
inline double hit_likelihood(Arrangement1D arr, CaptureProbability cap, HitPair pair) {
  return detail::hit(arr, cap.value(), pair);
}

// P(h_i = h | r0) for searcher 1 or 2.
inline double marginal_likelihood(Arrangement1D arr, CaptureProbability cap, int searcher, int h) {
  if (searcher != 1 && searcher != 2) throw ValidationError("searcher index must be 1 or 2");
  const double a = cap.value();
  const bool shadowed = (searcher == 2 && arr == Arrangement1D::SameSideS1Near) ||
                        (searcher == 1 && arr == Arrangement1D::SameSideS2Near);
  const double hit = shadowed ? a * (1.0 - a) : a;
  return h ? hit : 1.0 - hit;
}

inline PairLikelihood pair_likelihood(Arrangement1D arr, CaptureProbability cap) {
  PairLikelihood out{};
  for (HitPair p : kAllPairs) out[p.index()] = hit_likelihood(arr, cap, p);
  return out;
}

// Prior over source positions on [0, 1]. Densities need not be normalized;
// build_joint normalizes under its own quadrature.
class Prior1D {
 public:
  enum class Kind { Uniform, GaussianAtThird, Tabulated };

  static Prior1D uniform() { return Prior1D(Kind::Uniform); }
  // exp(-(r0 - 1/3)^2) truncated to [0, 1].
  static Prior1D gaussian_at_third() { return Prior1D(Kind::GaussianAtThird); }
  // Piecewise-linear density through (xs[i], weights[i]); xs must span [0, 1].
  static Prior1D tabulated(std::vector<double> xs, std::vector<double> weights) {
    if (xs.size() < 2 || xs.size() != weights.size())
      throw ValidationError("tabulated prior needs >= 2 matching samples");
    if (xs.front() != 0.0 || xs.back() != 1.0)
      throw ValidationError("tabulated prior samples must span exactly [0, 1]");
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!(weights[i] >= 0.0) || !std::isfinite(weights[i]))
        throw ValidationError("tabulated prior weights must be finite and non-negative");
      if (i > 0 && !(xs[i] > xs[i - 1]))
        throw ValidationError("tabulated prior samples must be strictly increasing");
    }
    Prior1D p(Kind::Tabulated);
    p.xs_ = std::move(xs);
    p.ws_ = std::move(weights);
    return p;
  }

  Kind kind() const { return kind_; }

  std::string name() const {
    switch (kind_) {
      case Kind::Uniform: return "uniform";
      case Kind::GaussianAtThird: return "gaussian";
      case Kind::Tabulated: return "tabulated";
    }
    return "?";
  }

  double density(double r) const {
    switch (kind_) {
      case Kind::Uniform: return 1.0;
      case Kind::GaussianAtThird: {
        const double z = r - 1.0 / 3.0;
        return std::exp(-z * z);
      }
      case Kind::Tabulated: {
        if (r <= xs_.front()) return ws_.front();
        if (r >= xs_.back()) return ws_.back();
        const auto it = std::upper_bound(xs_.begin(), xs_.end(), r);
        const std::size_t i = static_cast<std::size_t>(it - xs_.begin());
        const double t = (r - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
        return ws_[i - 1] + t * (ws_[i] - ws_[i - 1]);
      }
    }
    return 0.0;
  }

 private:
  explicit Prior1D(Kind k) : kind_(k) {}
  Kind kind_;
  std::vector<double> xs_, ws_;
};

inline constexpr std::size_t kDefaultQuadrature = 2001;
inline constexpr std::size_t kMinQuadrature = 101;

// Quadrature nodes over [0, 1] with r1 and r2 as breakpoints. Each segment gets
// its own uniform trapezoid grid and a single arrangement, so the piecewise
// constant likelihood is integrated exactly.
struct QuadratureNode {
  double r0;
  double weight;  // trapezoid weight times prior density, not yet normalized
  Arrangement1D arrangement;
};

inline std::vector<QuadratureNode> quadrature_nodes(double r1, double r2, const Prior1D& prior,
                                                    std::size_t n_quad) {
  const double lo = std::min(r1, r2);
  const double hi = std::max(r1, r2);
  const std::array<double, 4> cuts{0.0, lo, hi, 1.0};
  std::vector<QuadratureNode> nodes;
  nodes.reserve(n_quad + 6);
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double x0 = cuts[s];
    const double x1 = cuts[s + 1];
    const double len = x1 - x0;
    if (!(len > 0.0)) continue;
    const Arrangement1D arr = classify(0.5 * (x0 + x1), r1, r2);
    const auto intervals = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(static_cast<double>(n_quad - 1) * len)));
    const double h = len / static_cast<double>(intervals);
    for (std::size_t i = 0; i <= intervals; ++i) {
      const double r0 = i == intervals ? x1 : x0 + h * static_cast<double>(i);
      const double end = (i == 0 || i == intervals) ? 0.5 : 1.0;
      nodes.push_back({r0, h * end * prior.density(r0), arr});
    }
  }
  return nodes;
}

inline void check_positions(double r1, double r2, std::size_t n_quad) {
  for (double r : {r1, r2})
    if (!(r >= 0.0 && r <= 1.0)) throw DomainError("searcher positions must lie in [0, 1]");
  if (r1 == r2) throw ValidationError("searcher positions must differ");
  if (n_quad < kMinQuadrature)
    throw ValidationError("n_quad must be at least " + std::to_string(kMinQuadrature));
}

// P(h1, h2, r0) on the quadrature grid: axis 1 is h1, axis 2 is h2, axis 3 the nodes.
inline info::JointTable3 build_joint(double r1, double r2, CaptureProbability a,
                                     const Prior1D& prior,
                                     std::size_t n_quad = kDefaultQuadrature) {
  check_positions(r1, r2, n_quad);
  const auto nodes = quadrature_nodes(r1, r2, prior, n_quad);
  double total = 0.0;
  for (const auto& n : nodes) total += n.weight;
  if (!(total > 0.0) || !std::isfinite(total))
    throw ValidationError("prior carries no mass on [0, 1]");

  const std::array<PairLikelihood, 3> lik{
      pair_likelihood(Arrangement1D::SameSideS1Near, a),
      pair_likelihood(Arrangement1D::Between, a),
      pair_likelihood(Arrangement1D::SameSideS2Near, a)};

  const std::size_t n3 = nodes.size();
  std::vector<double> probs(4 * n3);
  for (std::size_t k = 0; k < n3; ++k) {
    const auto& l = lik[static_cast<std::size_t>(nodes[k].arrangement)];
    const double w = nodes[k].weight / total;
    for (HitPair p : kAllPairs)
      probs[static_cast<std::size_t>(p.index()) * n3 + k] = l[p.index()] * w;
  }
  return info::JointTable3(2, 2, n3, std::move(probs));
}

inline double R_of_positions(double r1, double r2, CaptureProbability a, const Prior1D& prior,
                             std::size_t n_quad = kDefaultQuadrature) {
  return info::redundancy(build_joint(r1, r2, a, prior, n_quad));
}

enum class LogBase { Natural, Binary };

// The small-a expansion does not name its logarithm. The natural log converges
// to the numeric R = 0 root as the searchers approach each other; base 2 does not.
inline constexpr LogBase kCriticalLogBase = LogBase::Natural;

inline constexpr double kMinSeparation = 1e-6;

// Small-a critical capture probability (leading order in a, uniform prior).
// Symmetric under r1 <-> r2. Throws DomainError when the expression leaves (0, 1).
inline double critical_a_closed(double r1, double r2, LogBase base = kCriticalLogBase) {
  for (double r : {r1, r2})
    if (!(r >= 0.0 && r <= 1.0)) throw DomainError("positions must lie in [0, 1]");
  if (std::abs(r1 - r2) < kMinSeparation)
    throw DomainError("searcher separation below " + std::to_string(kMinSeparation));
  if (r1 < r2) std::swap(r1, r2);
  const double lg = base == LogBase::Natural ? std::log(r1 - r2) : std::log2(r1 - r2);
  const double num = 3.0 * (r2 - r1) * lg;
  const double den = r1 * r1 * r1 - r2 * r2 * r2 - 3.0 * r1 * r1 + 2.0 * r1 + r2;
  if (std::abs(den) < 1e-12) throw DomainError("critical_a_closed: vanishing denominator");
  const double arg = num / den;
  if (!(arg > 0.0)) throw DomainError("critical_a_closed: non-positive square-root argument");
  const double ac = std::sqrt(arg);
  if (!(ac < 1.0))
    throw DomainError("critical_a_closed: expansion gives a_c = " + std::to_string(ac) +
                      " outside (0, 1)");
  return ac;
}

inline constexpr double kRootLow = 0.001;
inline constexpr double kRootHigh = 0.999;
inline constexpr double kRootTolerance = 1e-6;

// Bisection root of a -> R(r1, r2, a) on (0.001, 0.999).
inline double critical_a_numeric(double r1, double r2, const Prior1D& prior,
                                 std::size_t n_quad = kDefaultQuadrature) {
  auto f = [&](double a) { return R_of_positions(r1, r2, CaptureProbability(a), prior, n_quad); };
  double lo = kRootLow, hi = kRootHigh;
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::signbit(flo) == std::signbit(fhi))
    throw NoRootError("R keeps one sign for a in (0.001, 0.999): column is entirely " +
                      std::string(flo < 0.0 ? "synergetic" : "redundant"));
  while (hi - lo > 0.25 * kRootTolerance) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (std::signbit(fm) == std::signbit(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct CriticalCurve {
  enum class Method { ClosedForm, NumericRoot };
  Method method;
  double r2;
  // (r1, a_c) where a_c is defined; each a_c lies in (0, 1).
  std::vector<std::pair<double, double>> samples;
};

inline std::optional<double> try_critical(CriticalCurve::Method m, double r1, double r2,
                                          const Prior1D& prior, std::size_t n_quad) {
  try {
    return m == CriticalCurve::Method::ClosedForm ? critical_a_closed(r1, r2)
                                                  : critical_a_numeric(r1, r2, prior, n_quad);
  } catch (const DomainError&) {
  } catch (const NoRootError&) {
  } catch (const ValidationError&) {
  }
  return std::nullopt;
}

inline CriticalCurve critical_curve(CriticalCurve::Method method, double r2,
                                    const std::vector<double>& r1_grid, const Prior1D& prior,
                                    std::size_t n_quad = kDefaultQuadrature,
                                    unsigned workers = 1) {
  std::vector<std::optional<double>> out(r1_grid.size());
  parallel_for(r1_grid.size(), workers,
               [&](std::size_t i) { out[i] = try_critical(method, r1_grid[i], r2, prior, n_quad); });
  CriticalCurve c{method, r2, {}};
  for (std::size_t i = 0; i < out.size(); ++i)
    if (out[i]) c.samples.emplace_back(r1_grid[i], *out[i]);
  return c;
}

// R over (r1, a) with r2 fixed. Cells with r1 == r2 take the limit value 0.
inline GridField sweep_R_field_1d(double r2, const std::vector<double>& r1_grid,
                                  const std::vector<double>& a_grid, const Prior1D& prior,
                                  std::size_t n_quad = kDefaultQuadrature, unsigned workers = 1) {
  if (!(r2 > 0.0 && r2 < 1.0)) throw DomainError("r2 must lie strictly inside (0, 1)");
  GridField field("r1", r1_grid, "a", a_grid);
  for (double a : a_grid) (void)CaptureProbability(a);
  const std::size_t na = a_grid.size();
  bool coincident = false;
  parallel_for(r1_grid.size() * na, workers, [&](std::size_t idx) {
    const std::size_t i = idx / na;
    const std::size_t j = idx % na;
    field.values[idx] = r1_grid[i] == r2 ? 0.0
                                         : R_of_positions(r1_grid[i], r2,
                                                          CaptureProbability(a_grid[j]), prior,
                                                          n_quad);
  });
  for (double r1 : r1_grid) coincident = coincident || r1 == r2;
  field.metadata["model"] = "one_d";
  field.metadata["prior"] = prior.name();
  field.metadata["n_quad"] = std::to_string(n_quad);
  if (coincident) field.metadata["limit_zero"] = "cells with r1 == r2 set to the limit R = 0";
  return field;
}

// Number of cells with R > 0.
inline std::size_t redundant_cells(const GridField& f) {
  return static_cast<std::size_t>(
      std::count_if(f.values.begin(), f.values.end(), [](double v) { return v > 0.0; }));
}

}  // namespace coopsearch::model1d
