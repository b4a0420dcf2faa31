#include "geometry.hpp"

#include <limits>

namespace tl {

std::vector<Interval> merge_intervals(std::vector<Interval> parts, double tol) {
  if (parts.empty()) return {};
  std::sort(parts.begin(), parts.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> out;
  out.push_back(parts.front());
  for (size_t i = 1; i < parts.size(); ++i) {
    Interval& last = out.back();
    if (parts[i].lo <= last.hi + tol) {
      last.hi = std::max(last.hi, parts[i].hi);
    } else {
      out.push_back(parts[i]);
    }
  }
  return out;
}

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }),
            pts.end());
  size_t n = pts.size();
  if (n < 3) return pts;
  std::vector<Vec2> hull(2 * n);
  size_t k = 0;
  for (size_t i = 0; i < n; ++i) {
    while (k >= 2 && (hull[k - 1] - hull[k - 2]).cross(pts[i] - hull[k - 2]) <= 0) --k;
    hull[k++] = pts[i];
  }
  size_t lower = k + 1;
  for (size_t i = n - 1; i-- > 0;) {
    while (k >= lower && (hull[k - 1] - hull[k - 2]).cross(pts[i] - hull[k - 2]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

bool point_in_convex(const std::vector<Vec2>& hull, const Vec2& p) {
  size_t n = hull.size();
  if (n < 3) return false;
  for (size_t i = 0; i < n; ++i) {
    const Vec2& a = hull[i];
    const Vec2& b = hull[(i + 1) % n];
    if ((b - a).cross(p - a) < 0) return false;
  }
  return true;
}

static double dist_point_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  Vec2 ab = b - a;
  double len2 = ab.dot(ab);
  double t = len2 > 0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + ab * t)).norm();
}

double dist_to_polygon_boundary(const std::vector<Vec2>& hull, const Vec2& p) {
  double best = std::numeric_limits<double>::infinity();
  size_t n = hull.size();
  for (size_t i = 0; i < n; ++i) {
    best = std::min(best, dist_point_segment(p, hull[i], hull[(i + 1) % n]));
  }
  return best;
}

Interval project_polygon(const std::vector<Vec2>& poly, const Vec2& dir) {
  Interval out{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const Vec2& p : poly) {
    double v = p.dot(dir);
    out.lo = std::min(out.lo, v);
    out.hi = std::max(out.hi, v);
  }
  return out;
}

}  // namespace tl
