#include "prudent/lattice.hpp"

#include <cmath>
#include <cstdlib>

#include "prudent/errors.hpp"

namespace prudent {

Point::Point(int dim) : dim_(dim) {
  require(dim >= 1 && dim <= kMaxDim,
          "dimension must be in [1, " + std::to_string(kMaxDim) + "], got " + std::to_string(dim));
}

Point::Point(std::initializer_list<int> coords) : Point(static_cast<int>(coords.size())) {
  int i = 0;
  for (int v : coords) c_[static_cast<std::size_t>(i++)] = v;
}

Point Point::from_span(std::span<const int> coords) {
  Point p(static_cast<int>(coords.size()));
  for (std::size_t i = 0; i < coords.size(); ++i) p.c_[i] = coords[i];
  return p;
}

Point Point::operator+(const Point& o) const {
  check_same_dim(*this, o);
  Point r = *this;
  for (int i = 0; i < dim_; ++i) r[i] += o[i];
  return r;
}

Point Point::operator-(const Point& o) const {
  check_same_dim(*this, o);
  Point r = *this;
  for (int i = 0; i < dim_; ++i) r[i] -= o[i];
  return r;
}

Point Point::operator-() const {
  Point r = *this;
  for (int i = 0; i < dim_; ++i) r[i] = -r[i];
  return r;
}

Point& Point::operator+=(const Point& o) {
  *this = *this + o;
  return *this;
}

bool Point::is_origin() const {
  for (int i = 0; i < dim_; ++i)
    if (c_[static_cast<std::size_t>(i)] != 0) return false;
  return true;
}

long Point::l1() const {
  long s = 0;
  for (int i = 0; i < dim_; ++i) s += std::labs(c_[static_cast<std::size_t>(i)]);
  return s;
}

long Point::norm2() const {
  long s = 0;
  for (int i = 0; i < dim_; ++i) {
    long v = c_[static_cast<std::size_t>(i)];
    s += v * v;
  }
  return s;
}

long Point::linf() const {
  long m = 0;
  for (int i = 0; i < dim_; ++i) m = std::max(m, std::labs(c_[static_cast<std::size_t>(i)]));
  return m;
}

std::string Point::str() const {
  std::string s = "(";
  for (int i = 0; i < dim_; ++i) {
    if (i) s += ",";
    s += std::to_string(c_[static_cast<std::size_t>(i)]);
  }
  return s + ")";
}

std::size_t PointHash::operator()(const Point& p) const noexcept {
  std::size_t h = static_cast<std::size_t>(p.dim());
  for (int v : p.coords()) h = h * 1000003u ^ static_cast<std::size_t>(static_cast<unsigned>(v));
  return h;
}

Point UnitStep::vector(int dim) const {
  require(axis >= 0 && axis < dim, "step axis out of range");
  Point p(dim);
  p[axis] = sign;
  return p;
}

void check_same_dim(const Point& a, const Point& b) {
  if (a.dim() != b.dim())
    throw ContractError("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                        std::to_string(b.dim()));
}

UnitStep step_between(const Point& from, const Point& to) {
  Point diff = to - from;
  require(diff.l1() == 1, "points " + from.str() + " and " + to.str() + " are not neighbours");
  for (int i = 0; i < diff.dim(); ++i)
    if (diff[i] != 0) return {i, diff[i]};
  throw ContractError("unreachable");
}

bool sees(const Point& tip, const UnitStep& last_step, const Point& a) {
  check_same_dim(tip, a);
  require(last_step.axis >= 0 && last_step.axis < tip.dim(), "step axis out of range");
  Point diff = a - tip;
  for (int i = 0; i < diff.dim(); ++i)
    if (i != last_step.axis && diff[i] != 0) return false;
  return diff[last_step.axis] * last_step.sign >= 0;
}

bool bot(const Point& x, const Point& a) {
  check_same_dim(x, a);
  int differing = 0;
  for (int i = 0; i < x.dim(); ++i)
    if (x[i] != a[i]) ++differing;
  return differing <= 1;
}

Rational indicator_bot(const Point& x, const Point& a) {
  if (bot(x, a) && x != a) return Rational(1, x.dim());
  return Rational(0);
}

double indicator_bot_smoothed(const Point& x, double R) {
  require(R > 0, "smoothing radius R must be positive");
  if (x.is_origin() || !bot(x, Point(x.dim()))) return 0.0;
  return std::exp(-static_cast<double>(x.norm2()) / R) / x.dim();
}

Rational segment_indicator(const Point& a, const Point& b, const Point& x) {
  check_same_dim(a, b);
  check_same_dim(a, x);
  if (a == b || !bot(a, b)) return Rational(0);
  Point dx = x - a;
  if (dx.l1() != 1) return Rational(0);
  // x is on the segment iff dx points from a toward b along their common axis.
  Point ab = b - a;
  for (int i = 0; i < a.dim(); ++i) {
    if (dx[i] != 0) return (ab[i] * dx[i] > 0) ? Rational(1, a.dim()) : Rational(0);
  }
  return Rational(0);
}

Rational step_distribution(const Point& x) {
  if (x.l1() == 1) return Rational(1, 2 * x.dim());
  return Rational(0);
}

}  // namespace prudent
