#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cmath>
#include <string>

#include "coopsearch/errors.hpp"

namespace coopsearch {

// Probability that a particle crossing a searcher is captured. Strictly inside (0, 1).
class CaptureProbability {
 public:
  explicit CaptureProbability(double a) : a_(a) {
    if (!(a > 0.0 && a < 1.0))
      throw ValidationError("capture probability must lie strictly inside (0, 1), got " +
                            std::to_string(a));
  }
  double value() const { return a_; }

 private:
  double a_;
};

// Particle detections (h1, h2) in one emission step.
struct HitPair {
  int h1 = 0;
  int h2 = 0;

  // Index into a row-major 2x2 table: (h1, h2) -> 2*h1 + h2.
  constexpr int index() const { return 2 * h1 + h2; }
  friend constexpr bool operator==(const HitPair&, const HitPair&) = default;
};

// All four pairs in table order (1,1), (1,0), (0,1), (0,0) as the likelihood tables list them.
inline constexpr std::array<HitPair, 4> kTableOrder{{{1, 1}, {1, 0}, {0, 1}, {0, 0}}};

// All four pairs in index order.
inline constexpr std::array<HitPair, 4> kAllPairs{{{0, 0}, {0, 1}, {1, 0}, {1, 1}}};

// P(h1, h2 | r0) stored at HitPair::index().
using PairLikelihood = std::array<double, 4>;

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend constexpr bool operator==(const Point&, const Point&) = default;
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct Cell {
  int x = 0;
  int y = 0;
  friend constexpr bool operator==(const Cell&, const Cell&) = default;
  friend constexpr auto operator<=>(const Cell&, const Cell&) = default;
  Point center() const { return {static_cast<double>(x), static_cast<double>(y)}; }
};

// Regular grid of unit cells; cell (x, y) has its center at (x, y). Flat
// indices run x-major: index = x * ny + y.
struct Grid {
  int nx = 0;
  int ny = 0;

  Grid() = default;
  Grid(int nx_, int ny_) : nx(nx_), ny(ny_) {
    if (nx <= 0 || ny <= 0) throw ValidationError("grid dimensions must be positive");
  }
  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  bool contains(Cell c) const { return c.x >= 0 && c.x < nx && c.y >= 0 && c.y < ny; }
  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.x) * static_cast<std::size_t>(ny) +
           static_cast<std::size_t>(c.y);
  }
  Cell cell(std::size_t i) const {
    return {static_cast<int>(i / static_cast<std::size_t>(ny)),
            static_cast<int>(i % static_cast<std::size_t>(ny))};
  }
};

}  // namespace coopsearch
