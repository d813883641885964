#pragma once

// Two-dimensional disk-searcher model. The source emits two particles along a
// random axis: particle A at angle theta, particle B at theta + pi. A particle
// direction hits a searcher disk when it falls inside the arc of half-width
// alpha = asin(d / dist) around the direction to the disk center. Each axis
// falls into one of six cases, and the likelihood at r0 is the mixture of the
// per-case tables weighted by the fraction of axes in each case.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "coopsearch/errors.hpp"
#include "coopsearch/grid_field.hpp"
#include "coopsearch/info_core.hpp"
#include "coopsearch/model_1d.hpp"
#include "coopsearch/parallel.hpp"
#include "coopsearch/types.hpp"

namespace coopsearch::model2d {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct DiskSearcher {
  Point center;
  double radius = 0.0;
};

//   NoneHit         s0       neither particle crosses a searcher
//   S1Only          s0 s1    only s1 is crossed
//   S2Only          s0 s2    only s2 is crossed
//   Between         s1 s0 s2 the two particles cross different searchers
//   SameSideS1Near  s0 s1 s2 one particle crosses both, s1 first
//   SameSideS2Near  s0 s2 s1 one particle crosses both, s2 first
enum class AngularCase { NoneHit, S1Only, S2Only, Between, SameSideS1Near, SameSideS2Near };

inline constexpr std::array<AngularCase, 6> kAllCases{
    AngularCase::NoneHit, AngularCase::S1Only,         AngularCase::S2Only,
    AngularCase::Between, AngularCase::SameSideS1Near, AngularCase::SameSideS2Near};

inline const char* to_string(AngularCase c) {
  switch (c) {
    case AngularCase::NoneHit: return "NoneHit";
    case AngularCase::S1Only: return "S1Only";
    case AngularCase::S2Only: return "S2Only";
    case AngularCase::Between: return "Between";
    case AngularCase::SameSideS1Near: return "SameSideS1Near";
    case AngularCase::SameSideS2Near: return "SameSideS2Near";
  }
  return "?";
}

// Angle of the emission-axis circle assigned to each case, indexed by AngularCase.
struct AngularDecomposition {
  std::array<double, 6> delta{};

  double operator[](AngularCase c) const { return delta[static_cast<std::size_t>(c)]; }
  double fraction(AngularCase c) const { return (*this)[c] / kTwoPi; }
  double total() const {
    double s = 0.0;
    for (double d : delta) s += d;
    return s;
  }
};

// Half-width of the cone of directions from r0 that cross the disk. A source
// inside the disk gets pi/2: one of the two particles always crosses it.
inline double subtended_halfangle(Point r0, const DiskSearcher& s) {
  const double dist = distance(r0, s.center);
  if (dist <= s.radius) return std::numbers::pi / 2.0;
  return std::asin(std::min(1.0, s.radius / dist));
}

inline double wrap_angle(double t) {
  t = std::fmod(t, kTwoPi);
  return t < 0.0 ? t + kTwoPi : t;
}

// Signed difference t - u folded into [-pi, pi).
inline double angle_diff(double t, double u) {
  return wrap_angle(t - u + std::numbers::pi) - std::numbers::pi;
}

struct SearcherArc {
  double direction;  // bearing of the disk center seen from the source
  double halfwidth;
  double dist;
};

// Precomputed arcs for one (source, s1, s2) configuration.
class AxisGeometry {
 public:
  AxisGeometry(Point r0, const DiskSearcher& s1, const DiskSearcher& s2) {
    validate(s1, s2);
    arc1_ = make_arc(r0, s1, s2.center);
    arc2_ = make_arc(r0, s2, s1.center);
  }

  static void validate(const DiskSearcher& s1, const DiskSearcher& s2) {
    if (!(s1.radius > 0.0) || !(s2.radius > 0.0))
      throw ValidationError("searcher radius must be positive");
    const double sep = distance(s1.center, s2.center);
    if (sep == 0.0) throw ValidationError("searcher centers coincide");
    if (sep <= s1.radius + s2.radius) throw ValidationError("searcher disks overlap");
  }

  const SearcherArc& arc1() const { return arc1_; }
  const SearcherArc& arc2() const { return arc2_; }

  // Case of the axis whose particle A travels at angle theta.
  AngularCase classify(double theta) const {
    const bool a1 = inside(theta, arc1_);
    const bool a2 = inside(theta, arc2_);
    const bool b1 = inside(theta + std::numbers::pi, arc1_);
    const bool b2 = inside(theta + std::numbers::pi, arc2_);
    if ((a1 && b2) || (a2 && b1)) return AngularCase::Between;
    if ((a1 && a2) || (b1 && b2))
      return arc1_.dist <= arc2_.dist ? AngularCase::SameSideS1Near : AngularCase::SameSideS2Near;
    if (a1 || b1) return AngularCase::S1Only;
    if (a2 || b2) return AngularCase::S2Only;
    return AngularCase::NoneHit;
  }

  // Angles where the classification can change: arc edges for both particles.
  std::vector<double> breakpoints() const {
    std::vector<double> pts{0.0, kTwoPi};
    for (const SearcherArc* arc : {&arc1_, &arc2_})
      for (double shift : {0.0, std::numbers::pi})
        for (double edge : {-arc->halfwidth, arc->halfwidth})
          pts.push_back(wrap_angle(arc->direction + shift + edge));
    std::sort(pts.begin(), pts.end());
    return pts;
  }

 private:
  static bool inside(double theta, const SearcherArc& arc) {
    return std::abs(angle_diff(theta, arc.direction)) < arc.halfwidth;
  }

  // A source sitting exactly on a disk center has no bearing to it; the arc is
  // then oriented toward the other searcher so that this disk shadows it.
  static SearcherArc make_arc(Point r0, const DiskSearcher& s, Point other) {
    const double dist = distance(r0, s.center);
    Point toward = s.center;
    if (dist == 0.0) toward = other;
    const double dir = wrap_angle(std::atan2(toward.y - r0.y, toward.x - r0.x));
    return {dir, subtended_halfangle(r0, s), dist};
  }

  SearcherArc arc1_{};
  SearcherArc arc2_{};
};

// Exact partition of (0, 2pi] into the six cases: the classification is
// constant between consecutive arc edges, so each sub-interval is classified
// at its midpoint.
inline AngularDecomposition decompose_angles(Point r0, const DiskSearcher& s1,
                                             const DiskSearcher& s2) {
  const AxisGeometry geo(r0, s1, s2);
  const auto pts = geo.breakpoints();
  AngularDecomposition out;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double width = pts[i + 1] - pts[i];
    if (!(width > 0.0)) continue;
    const AngularCase c = geo.classify(0.5 * (pts[i] + pts[i + 1]));
    out.delta[static_cast<std::size_t>(c)] += width;
  }
  return out;
}

namespace detail {

inline PairLikelihood case_table(AngularCase c, double a) {
  PairLikelihood t{};
  const auto fill_1d = [&](model1d::Arrangement1D arr) {
    for (HitPair p : kAllPairs) t[p.index()] = model1d::detail::hit(arr, a, p);
  };
  switch (c) {
    case AngularCase::NoneHit:
      t[HitPair{0, 0}.index()] = 1.0;
      break;
    case AngularCase::S1Only:
      t[HitPair{1, 0}.index()] = a;
      t[HitPair{0, 0}.index()] = 1.0 - a;
      break;
    case AngularCase::S2Only:
      t[HitPair{0, 1}.index()] = a;
      t[HitPair{0, 0}.index()] = 1.0 - a;
      break;
    case AngularCase::Between: fill_1d(model1d::Arrangement1D::Between); break;
    case AngularCase::SameSideS1Near: fill_1d(model1d::Arrangement1D::SameSideS1Near); break;
    case AngularCase::SameSideS2Near: fill_1d(model1d::Arrangement1D::SameSideS2Near); break;
  }
  return t;
}

inline PairLikelihood mixture(const AngularDecomposition& dec, double a) {
  PairLikelihood out{};
  for (AngularCase c : kAllCases) {
    const double w = dec.fraction(c);
    if (w == 0.0) continue;
    const auto t = case_table(c, a);
    for (std::size_t k = 0; k < 4; ++k) out[k] += w * t[k];
  }
  return out;
}

}  // namespace detail

inline double case_likelihood(AngularCase c, CaptureProbability a, HitPair pair) {
  return detail::case_table(c, a.value())[pair.index()];
}

// P(h_i = h | case): the per-searcher columns of the case tables.
inline double case_marginal(AngularCase c, CaptureProbability a, int searcher, int h) {
  if (searcher != 1 && searcher != 2) throw ValidationError("searcher index must be 1 or 2");
  const auto t = detail::case_table(c, a.value());
  double p = 0.0;
  for (HitPair pair : kAllPairs)
    if ((searcher == 1 ? pair.h1 : pair.h2) == h) p += t[pair.index()];
  return p;
}

// P(h1, h2 | r0) for all four pairs.
inline PairLikelihood superposed_table(Point r0, const DiskSearcher& s1, const DiskSearcher& s2,
                                       CaptureProbability a) {
  return detail::mixture(decompose_angles(r0, s1, s2), a.value());
}

inline double superposed_likelihood(Point r0, const DiskSearcher& s1, const DiskSearcher& s2,
                                    CaptureProbability a, HitPair pair) {
  return superposed_table(r0, s1, s2, a)[pair.index()];
}

// A * exp(-|r0 - s|^2 / sigma^2) over grid cells, flat x-major.
inline std::vector<double> gaussian_prior_2d(const Grid& grid, Point peak, double sigma) {
  if (!(sigma > 0.0)) throw ValidationError("sigma must be positive");
  std::vector<double> p(grid.size());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Point c = grid.cell(i).center();
    const double dx = c.x - peak.x;
    const double dy = c.y - peak.y;
    p[i] = std::exp(-(dx * dx + dy * dy) / (sigma * sigma));
    total += p[i];
  }
  if (!(total > 0.0)) throw ValidationError("gaussian prior underflows on this grid");
  for (double& v : p) v /= total;
  return p;
}

// Reference scenario for the synergy maps.
struct Scenario2D {
  Grid grid{7, 7};
  Point r2{2.0, 4.0};
  Point prior_peak{2.0, 2.0};
  double radius = 0.45;
  double sigma = 2.0;
  // Drop source hypotheses at cells a searcher occupies: a source there would
  // be found outright rather than measured.
  bool exclude_occupied = true;
};

// P(h1, h2, r0) over grid cells: axis 1 h1, axis 2 h2, axis 3 the kept cells.
inline info::JointTable3 build_joint_2d(Point r1, Point r2, CaptureProbability a, double radius,
                                        const std::vector<double>& prior, const Grid& grid,
                                        bool exclude_occupied = true) {
  if (prior.size() != grid.size()) throw ValidationError("prior does not match grid size");
  const DiskSearcher s1{r1, radius};
  const DiskSearcher s2{r2, radius};
  AxisGeometry::validate(s1, s2);
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point c = grid.cell(i).center();
    if (exclude_occupied && (c == r1 || c == r2)) continue;
    if (prior[i] > 0.0) kept.push_back(i);
  }
  double total = 0.0;
  for (std::size_t i : kept) total += prior[i];
  if (kept.empty() || !(total > 0.0)) throw ValidationError("prior carries no mass");

  const std::size_t n3 = kept.size();
  std::vector<double> probs(4 * n3);
  for (std::size_t k = 0; k < n3; ++k) {
    const std::size_t i = kept[k];
    const auto lik = superposed_table(grid.cell(i).center(), s1, s2, a);
    for (HitPair p : kAllPairs)
      probs[static_cast<std::size_t>(p.index()) * n3 + k] = lik[p.index()] * prior[i] / total;
  }
  return info::JointTable3(2, 2, n3, std::move(probs));
}

inline double R_of_positions_2d(Point r1, Point r2, CaptureProbability a, double radius,
                                const std::vector<double>& prior, const Grid& grid,
                                bool exclude_occupied = true) {
  if (r1 == r2) throw ValidationError("searcher positions must differ");
  return info::redundancy(build_joint_2d(r1, r2, a, radius, prior, grid, exclude_occupied));
}

// R over every r1 cell with r2 fixed; the r2 cell is reported as the limit 0.
inline GridField sweep_R_field_2d(const Scenario2D& sc, CaptureProbability a,
                                  unsigned workers = 1) {
  const auto prior = gaussian_prior_2d(sc.grid, sc.prior_peak, sc.sigma);
  std::vector<double> xs(static_cast<std::size_t>(sc.grid.nx));
  std::vector<double> ys(static_cast<std::size_t>(sc.grid.ny));
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(i);
  for (std::size_t j = 0; j < ys.size(); ++j) ys[j] = static_cast<double>(j);
  GridField field("x1", xs, "y1", ys);
  parallel_for(sc.grid.size(), workers, [&](std::size_t i) {
    const Point r1 = sc.grid.cell(i).center();
    field.values[i] =
        r1 == sc.r2 ? 0.0
                    : R_of_positions_2d(r1, sc.r2, a, sc.radius, prior, sc.grid,
                                        sc.exclude_occupied);
  });
  field.metadata["model"] = "two_d";
  if (sc.grid.contains({static_cast<int>(sc.r2.x), static_cast<int>(sc.r2.y)}) &&
      sc.r2 == Point{std::round(sc.r2.x), std::round(sc.r2.y)})
    field.metadata["limit_zero"] = "cell x1=" + std::to_string(static_cast<int>(sc.r2.x)) +
                                   " y1=" + std::to_string(static_cast<int>(sc.r2.y)) +
                                   " is r2; set to the limit R = 0";
  return field;
}

}  // namespace coopsearch::model2d
