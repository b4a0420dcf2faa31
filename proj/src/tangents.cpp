#include "tangents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace tl {

double hausdorff_distance(const PointCloud& a, const PointCloud& b) {
  if (a.frame != b.frame) throw std::domain_error("hausdorff_distance: mixed frames");
  if (a.points.empty() || b.points.empty())
    throw std::domain_error("hausdorff_distance: empty cloud");
  auto one_sided = [](const std::vector<Vec2>& from, const std::vector<Vec2>& to) {
    double worst = 0.0;
    for (const Vec2& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const Vec2& q : to) best = std::min(best, (p - q).norm());
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_sided(a.points, b.points), one_sided(b.points, a.points));
}

namespace {

// Sample the rectangle union (clipped to the unit ball) on a grid so the
// cloud-vs-cloud Hausdorff distance approximates the set distance.
PointCloud discretize_rects(const std::vector<ScreenRect>& rects, double spacing) {
  PointCloud cloud;
  cloud.frame = Frame::Screen;
  for (const ScreenRect& r : rects) {
    int nx = std::max(1, static_cast<int>(std::ceil(2 * r.half_w / spacing)));
    int ny = std::max(1, static_cast<int>(std::ceil(2 * r.half_h / spacing)));
    for (int i = 0; i <= nx; ++i)
      for (int j = 0; j <= ny; ++j) {
        Vec2 p{r.center.x - r.half_w + 2 * r.half_w * i / nx,
               r.center.y - r.half_h + 2 * r.half_h * j / ny};
        if (p.norm() <= 1.0) cloud.points.push_back(p);
      }
  }
  return cloud;
}

std::vector<Interval> fiber_intervals(const std::vector<ScreenRect>& rects) {
  std::vector<Interval> ys;
  for (const ScreenRect& r : rects) ys.push_back(r.y_iv());
  return merge_intervals(std::move(ys), 0.0);
}

}  // namespace

TangentReport modified_tangent(const IFSSystem& ifs, const ZoomPoint& zp,
                               const std::vector<double>& scales, int K, int samples,
                               uint64_t seed, uint64_t stream) {
  if (scales.empty()) throw std::domain_error("modified_tangent: no scales given");
  for (size_t k = 0; k < scales.size(); ++k) {
    if (!(scales[k] > 0)) throw std::domain_error("modified_tangent: scales must be positive");
    if (k > 0 && !(scales[k] < scales[k - 1]))
      throw std::domain_error("modified_tangent: scales must be strictly decreasing");
  }

  TangentReport rep;
  rep.epsilon = epsilon_bound(ifs, K);

  std::vector<ApproxScenery> scenes;
  for (size_t idx = 0; idx < scales.size(); ++idx) {
    double t = scales[idx];
    ApproxScenery sc = approx_scenery(ifs, zp, t, K, samples, seed, stream + idx);
    ScaleTraceRow row;
    row.scale = t;
    row.level = sc.screen.level;
    row.ratio = std::exp(sc.screen.log_alpha2) / t;
    row.pattern = detect_pattern(sc.rectangles, rep.epsilon).is_pattern;
    PointCloud pk = discretize_rects(sc.rectangles, 0.02);
    row.d_hausdorff = (pk.points.empty() || sc.sampled_screen.points.empty())
                          ? std::numeric_limits<double>::infinity()
                          : hausdorff_distance(pk, sc.sampled_screen);
    rep.trace.push_back(row);
    scenes.push_back(std::move(sc));
  }

  bool any_positive_level = false;
  for (const ScaleTraceRow& row : rep.trace) any_positive_level |= row.level > 0;
  if (rep.trace.size() < 2 || !any_positive_level) {
    rep.cls = TangentClass::Undetermined;
    rep.note = "not enough refined scales to classify";
    return rep;
  }

  double min_ratio = std::numeric_limits<double>::infinity();
  for (const ScaleTraceRow& row : rep.trace) min_ratio = std::min(min_ratio, row.ratio);
  const ScaleTraceRow& last = rep.trace.back();
  const ApproxScenery& final_scene = scenes.back();

  if (min_ratio >= 1e-3 && last.pattern) {
    rep.cls = TangentClass::Fibered;
    rep.deformation_bound = std::min(1.0 / min_ratio, 1e3);
    rep.fiber_set = fiber_intervals(final_scene.rectangles);
    rep.porosity = porosity_estimate(rep.fiber_set);
    return rep;
  }

  bool decaying = true;
  for (size_t k = 1; k < rep.trace.size(); ++k)
    decaying &= rep.trace[k].ratio <= rep.trace[k - 1].ratio * (1.0 + 1e-9);
  double collapse = 0.0;
  Interval xhull{HUGE_VAL, -HUGE_VAL};
  for (const ScreenRect& r : final_scene.rectangles) {
    collapse = std::max({collapse, std::abs(r.center.y) + r.half_h});
    xhull = {std::min(xhull.lo, r.center.x - r.half_w), std::max(xhull.hi, r.center.x + r.half_w)};
  }
  if (decaying && last.ratio <= rep.trace.front().ratio / 10.0 && collapse <= 2.0 * rep.epsilon) {
    rep.cls = TangentClass::Segment;
    rep.segment = {std::max(xhull.lo, -1.0), std::min(xhull.hi, 1.0)};
    return rep;
  }

  rep.cls = TangentClass::Undetermined;
  std::ostringstream note;
  note << "min ratio " << min_ratio << ", final pattern " << (last.pattern ? "yes" : "no")
       << ", vertical extent " << collapse;
  rep.note = note.str();
  return rep;
}

double porosity_estimate(const std::vector<Interval>& fiber_set, std::vector<double> radii) {
  std::vector<Interval> set = merge_intervals(fiber_set, 0.0);
  if (set.empty()) throw std::domain_error("porosity_estimate: empty fiber set");

  double max_len = 0.0;
  for (const Interval& iv : set) max_len = std::max(max_len, iv.length());
  if (radii.empty()) {
    for (double r : {1.0, 0.5, 0.25, 0.125})
      if (r >= 4.0 * max_len) radii.push_back(r);
    if (radii.empty()) radii.push_back(1.0);
  }

  // Largest hole of [x-r, x+r] \ set, as a radius.
  auto hole = [&set](double x, double r) {
    double lo = x - r, hi = x + r;
    double best = 0.0, cursor = lo;
    for (const Interval& iv : set) {
      if (iv.hi < lo) continue;
      if (iv.lo > hi) break;
      best = std::max(best, std::min(iv.lo, hi) - cursor);
      cursor = std::max(cursor, iv.hi);
    }
    best = std::max(best, hi - cursor);
    return 0.5 * best;
  };

  double alpha = 0.5;
  for (const Interval& iv : set)
    for (double x : {iv.lo, iv.mid(), iv.hi})
      for (double r : radii) alpha = std::min(alpha, hole(x, r) / r);

  alpha = std::floor(alpha * 256.0) / 256.0;  // defensible dyadic floor
  return std::clamp(alpha, 0.0, 0.5);
}

}  // namespace tl
