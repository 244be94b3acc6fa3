#pragma once

// Geometry of the hypercubic lattice Z^d: points, unit steps, the seeing
// relation, the axis relation and its indicator functions, and the
// nearest-neighbour step distribution.

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>

#include "prudent/rational.hpp"

namespace prudent {

inline constexpr int kMaxDim = 8;

/// A point of Z^d for 1 <= d <= kMaxDim. Coordinates beyond `dim()` are
/// kept at zero so that equality and hashing are well defined.
class Point {
 public:
  Point() = default;
  explicit Point(int dim);
  Point(std::initializer_list<int> coords);
  static Point from_span(std::span<const int> coords);

  int dim() const { return dim_; }
  int operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  int& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
  std::span<const int> coords() const { return {c_.data(), static_cast<std::size_t>(dim_)}; }

  Point operator+(const Point& o) const;
  Point operator-(const Point& o) const;
  Point operator-() const;
  Point& operator+=(const Point& o);

  bool is_origin() const;
  /// |x|_1
  long l1() const;
  /// |x|^2
  long norm2() const;
  long linf() const;

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;

  std::string str() const;

 private:
  int dim_ = 0;
  std::array<int, kMaxDim> c_{};
};

struct PointHash {
  std::size_t operator()(const Point& p) const noexcept;
};

/// One of the 2d unit vectors +-e_axis. `axis` is zero-based here.
struct UnitStep {
  int axis = 0;
  int sign = 1;

  /// Step codes order steps by axis, then sign (-1 before +1):
  /// code = 2*axis + (sign > 0).
  int code() const { return 2 * axis + (sign > 0 ? 1 : 0); }
  static UnitStep from_code(int code) { return {code / 2, (code % 2) ? 1 : -1}; }
  Point vector(int dim) const;
  friend bool operator==(const UnitStep&, const UnitStep&) = default;
};

/// Returns the unit step taking `from` to `to`; throws if they are not
/// nearest neighbours.
UnitStep step_between(const Point& from, const Point& to);

/// tip "sees" a: a - tip = k * last_step for some integer k >= 0.
bool sees(const Point& tip, const UnitStep& last_step, const Point& a);

/// x and a differ in at most one coordinate.
bool bot(const Point& x, const Point& a);

/// 1/d if bot(x, a) and x != a, else 0.
Rational indicator_bot(const Point& x, const Point& a);

/// (1/d) exp(-|x|^2 / R) on the punctured axes, else 0.
double indicator_bot_smoothed(const Point& x, double R);

/// 1/d when a and b are distinct and axis-aligned and x is the lattice
/// neighbour of a on the closed segment [a, b]; else 0.
Rational segment_indicator(const Point& a, const Point& b, const Point& x);

/// Simple random walk step distribution D(x) = 1/(2d) on |x|_1 = 1.
Rational step_distribution(const Point& x);

void check_same_dim(const Point& a, const Point& b);

}  // namespace prudent
