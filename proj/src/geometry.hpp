#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace tl {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }

  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  Vec2 normalized() const {
    double n = norm();
    return n > 0 ? Vec2{x / n, y / n} : Vec2{0, 0};
  }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

// 2x2 matrix, row major.
struct Mat2 {
  double a = 0, b = 0, c = 0, d = 0;  // [[a, b], [c, d]]

  static Mat2 identity() { return {1, 0, 0, 1}; }
  static Mat2 diag(double p, double q) { return {p, 0, 0, q}; }
  static Mat2 rotation(double angle) {
    double co = std::cos(angle), si = std::sin(angle);
    return {co, -si, si, co};
  }

  Vec2 operator*(const Vec2& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  Mat2 operator*(double s) const { return {a * s, b * s, c * s, d * s}; }

  Mat2 transpose() const { return {a, c, b, d}; }
  double det() const { return a * d - b * c; }
  Mat2 inverse() const {
    double dt = det();
    return {d / dt, -b / dt, -c / dt, a / dt};
  }
  Vec2 col(int k) const { return k == 0 ? Vec2{a, c} : Vec2{b, d}; }
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double v) const { return lo <= v && v <= hi; }
  bool intersects(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
  Interval hull(const Interval& o) const { return {std::min(lo, o.lo), std::max(hi, o.hi)}; }
  // Gap between disjoint intervals, 0 when they touch or overlap.
  double gap(const Interval& o) const { return std::max({o.lo - hi, lo - o.hi, 0.0}); }
};

// Outward-rounded interval arithmetic, enough rigor for cover certificates.
inline double next_up(double v) { return std::nextafter(v, HUGE_VAL); }
inline double next_down(double v) { return std::nextafter(v, -HUGE_VAL); }

inline Interval iadd(const Interval& p, const Interval& q) {
  return {next_down(p.lo + q.lo), next_up(p.hi + q.hi)};
}

inline Interval iscale(const Interval& p, double s) {
  double u = s * p.lo, v = s * p.hi;
  if (u > v) std::swap(u, v);
  return {next_down(u), next_up(v)};
}

inline Interval ishift(const Interval& p, double s) {
  return {next_down(p.lo + s), next_up(p.hi + s)};
}

struct Box2 {
  Interval x;
  Interval y;

  Vec2 center() const { return {x.mid(), y.mid()}; }
  double diam() const { return std::hypot(x.length(), y.length()); }
  bool contains(const Vec2& p) const { return x.contains(p.x) && y.contains(p.y); }
  bool contains(const Box2& o) const {
    return x.lo <= o.x.lo && o.x.hi <= x.hi && y.lo <= o.y.lo && o.y.hi <= y.hi;
  }
  bool intersects(const Box2& o) const { return x.intersects(o.x) && y.intersects(o.y); }
  Box2 hull(const Box2& o) const { return {x.hull(o.x), y.hull(o.y)}; }
  Box2 inflated(double r) const { return {{x.lo - r, x.hi + r}, {y.lo - r, y.hi + r}}; }

  double dist(const Vec2& p) const {
    double dx = std::max({x.lo - p.x, p.x - x.hi, 0.0});
    double dy = std::max({y.lo - p.y, p.y - y.hi, 0.0});
    return std::hypot(dx, dy);
  }
  double dist(const Box2& o) const { return std::hypot(x.gap(o.x), y.gap(o.y)); }

  std::array<Vec2, 4> corners() const {
    return {Vec2{x.lo, y.lo}, Vec2{x.hi, y.lo}, Vec2{x.hi, y.hi}, Vec2{x.lo, y.hi}};
  }
};

// Rigorous outer box of {A p + b : p in box}.
inline Box2 affine_image_box(const Mat2& A, const Vec2& b, const Box2& box) {
  Interval ix = ishift(iadd(iscale(box.x, A.a), iscale(box.y, A.b)), b.x);
  Interval iy = ishift(iadd(iscale(box.x, A.c), iscale(box.y, A.d)), b.y);
  return {ix, iy};
}

// Merge intervals into maximal disjoint pieces; intervals closer than tol are joined.
std::vector<Interval> merge_intervals(std::vector<Interval> parts, double tol = 0.0);

// Andrew monotone chain, returns hull in counter-clockwise order.
std::vector<Vec2> convex_hull(std::vector<Vec2> pts);

// Signed distance helpers for convex polygons (ccw order).
bool point_in_convex(const std::vector<Vec2>& hull, const Vec2& p);
double dist_to_polygon_boundary(const std::vector<Vec2>& hull, const Vec2& p);

// Projection interval of a polygon onto a unit direction.
Interval project_polygon(const std::vector<Vec2>& poly, const Vec2& dir);

}  // namespace tl
