#pragma once

// Brute-force reference computations. None of these call into the code they
// are used to check: angular fractions come from casting rays against disks,
// R from summing a raw table, and the planner score from a literal double sum
// over outcomes and source cells.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "coopsearch/rng.hpp"
#include "coopsearch/types.hpp"

namespace coopsearch::oracle {

struct OracleReport {
  std::string quantity;
  double reference = 0.0;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::size_t samples = 0;  // 0 for deterministic checks
};

// Case labels match model2d::AngularCase order: none, s1 only, s2 only,
// between, same side with s1 nearer, same side with s2 nearer.
inline constexpr std::size_t kCases = 6;

struct Disk {
  Point center;
  double radius;
};

struct AngularFractions {
  std::array<double, kCases> fraction{};
  std::array<double, kCases> stderr_{};
  std::size_t samples = 0;
};

enum class Sampling {
  Iid,         // n independent uniform angles
  Stratified,  // one uniform angle in each of n equal sub-intervals
};

namespace detail {

// Distance along the ray from `from` in direction (ux, uy) at which it enters
// the disk, or -1 if it misses. A ray from inside the disk counts as crossing
// it only when it heads toward the center half-plane; a ray from the exact
// center uses the direction to `fallback` as its reference.
inline double ray_entry(Point from, double ux, double uy, const Disk& d, Point fallback) {
  const double vx = d.center.x - from.x;
  const double vy = d.center.y - from.y;
  const double v2 = vx * vx + vy * vy;
  if (v2 == 0.0) {
    const double fx = fallback.x - from.x;
    const double fy = fallback.y - from.y;
    return fx * ux + fy * uy > 0.0 ? 0.0 : -1.0;
  }
  const double along = vx * ux + vy * uy;
  if (!(along > 0.0)) return -1.0;
  const double perp2 = v2 - along * along;
  const double r2 = d.radius * d.radius;
  if (!(perp2 < r2)) return -1.0;
  if (v2 <= r2) return 0.0;
  return along - std::sqrt(r2 - perp2);
}

inline std::size_t classify_ray_pair(Point src, double theta, const Disk& d1, const Disk& d2) {
  const double ux = std::cos(theta);
  const double uy = std::sin(theta);
  // Particle A goes along (ux, uy), particle B along (-ux, -uy).
  const double a1 = ray_entry(src, ux, uy, d1, d2.center);
  const double a2 = ray_entry(src, ux, uy, d2, d1.center);
  const double b1 = ray_entry(src, -ux, -uy, d1, d2.center);
  const double b2 = ray_entry(src, -ux, -uy, d2, d1.center);
  const bool A1 = a1 >= 0.0, A2 = a2 >= 0.0, B1 = b1 >= 0.0, B2 = b2 >= 0.0;
  if ((A1 && B2) || (A2 && B1)) return 3;
  if (A1 && A2) return a1 <= a2 ? 4 : 5;
  if (B1 && B2) return b1 <= b2 ? 4 : 5;
  if (A1 || B1) return 1;
  if (A2 || B2) return 2;
  return 0;
}

}  // namespace detail

// Fractions of emission axes in each case, by casting n rays.
inline AngularFractions mc_angular_fraction(Point source, const Disk& d1, const Disk& d2,
                                            std::size_t n, Rng& rng,
                                            Sampling sampling = Sampling::Stratified) {
  std::array<std::size_t, kCases> counts{};
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = uniform01(rng);
    const double theta = sampling == Sampling::Iid
                             ? two_pi * u
                             : two_pi * (static_cast<double>(i) + u) / static_cast<double>(n);
    ++counts[detail::classify_ray_pair(source, theta, d1, d2)];
  }
  AngularFractions out;
  out.samples = n;
  for (std::size_t c = 0; c < kCases; ++c) {
    const double p = static_cast<double>(counts[c]) / static_cast<double>(n);
    out.fraction[c] = p;
    out.stderr_[c] = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  }
  return out;
}

// R = I(X1;X2) - I(X1;X2|X3) for a raw n1 x n2 x n3 table (index (i*n2+j)*n3+k),
// written from the full-table marginals without the library's entropy code.
inline double direct_R(std::size_t n1, std::size_t n2, std::size_t n3,
                       const std::vector<double>& p) {
  std::vector<double> p12(n1 * n2, 0.0), p13(n1 * n3, 0.0), p23(n2 * n3, 0.0);
  std::vector<double> p1(n1, 0.0), p2(n2, 0.0), p3(n3, 0.0);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j)
      for (std::size_t k = 0; k < n3; ++k) {
        const double v = p[(i * n2 + j) * n3 + k];
        p12[i * n2 + j] += v;
        p13[i * n3 + k] += v;
        p23[j * n3 + k] += v;
        p1[i] += v;
        p2[j] += v;
        p3[k] += v;
      }
  double mi = 0.0;
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j) {
      const double v = p12[i * n2 + j];
      if (v > 0.0) mi += v * std::log(v / (p1[i] * p2[j]));
    }
  double cmi = 0.0;
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j)
      for (std::size_t k = 0; k < n3; ++k) {
        const double v = p[(i * n2 + j) * n3 + k];
        if (v > 0.0) cmi += v * std::log(v * p3[k] / (p13[i * n3 + k] * p23[j * n3 + k]));
      }
  return (mi - cmi) / std::numbers::ln2;
}

// Literal expected entropy change for a candidate joint position.
//   posterior    P(r0) over cells
//   likelihood   likelihood[r0][h] = P(h | r0) at the candidate, h = 2*h1 + h2
//   found        flat indices of the candidate cells
inline double exhaustive_expected_dS(const std::vector<double>& posterior,
                                     const std::vector<std::array<double, 4>>& likelihood,
                                     const std::vector<std::size_t>& found) {
  double S = 0.0;
  for (double p : posterior)
    if (p > 0.0) S -= p * std::log(p);
  S /= std::numbers::ln2;

  double p_found = 0.0;
  for (std::size_t c : found) p_found += posterior[c];

  double second = 0.0;
  for (std::size_t h = 0; h < 4; ++h) {
    double trace = 0.0;
    for (std::size_t r = 0; r < posterior.size(); ++r) trace += posterior[r] * likelihood[r][h];
    if (trace == 0.0) continue;
    // S_h = log Z - (1/Z) sum u log u with u = P(r) P(h|r), Z = trace.
    double ulogu = 0.0;
    for (std::size_t r = 0; r < posterior.size(); ++r) {
      const double u = posterior[r] * likelihood[r][h];
      if (u > 0.0) ulogu += u * std::log(u);
    }
    const double S_h = (std::log(trace) - ulogu / trace) / std::numbers::ln2;
    second += (S_h - S) * trace;
  }
  return -p_found * S + (1.0 - p_found) * second;
}

}  // namespace coopsearch::oracle
