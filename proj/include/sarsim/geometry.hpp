#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <ostream>

namespace sarsim {

/// Point or vector in the local planar frame, meters (or m/s for velocities).
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr bool operator==(const Vec2&) const = default;

  double norm() const { return std::hypot(x, y); }
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

/// Integer grid cell index. i grows east, j grows north.
struct Cell {
  int i = 0;
  int j = 0;

  constexpr auto operator<=>(const Cell&) const = default;
};

inline int manhattan(Cell a, Cell b) { return std::abs(a.i - b.i) + std::abs(a.j - b.j); }
inline int chebyshev(Cell a, Cell b) {
  return std::max(std::abs(a.i - b.i), std::abs(a.j - b.j));
}

inline std::ostream& operator<<(std::ostream& os, Cell c) {
  return os << "(" << c.i << ", " << c.j << ")";
}
inline std::ostream& operator<<(std::ostream& os, Vec2 v) {
  return os << "(" << v.x << ", " << v.y << ")";
}

/// The four legal moves in tie-break priority order: E, N, W, S.
enum class Move : std::uint8_t { East = 0, North = 1, West = 2, South = 3 };

inline constexpr Move kMoveOrder[4] = {Move::East, Move::North, Move::West, Move::South};

constexpr Cell step(Cell c, Move m) {
  switch (m) {
    case Move::East: return {c.i + 1, c.j};
    case Move::North: return {c.i, c.j + 1};
    case Move::West: return {c.i - 1, c.j};
    case Move::South: return {c.i, c.j - 1};
  }
  return c;
}

}  // namespace sarsim
