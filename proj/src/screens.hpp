#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "affine.hpp"
#include "spectral.hpp"
#include "symbolic.hpp"

namespace tl {

// A zoom target pi(prefix · tail^inf); eventually periodic, so every
// finite truncation of the address is available exactly.
struct ZoomPoint {
  FiniteWord prefix;
  FiniteWord tail{1};  // repeated forever after the prefix

  Vec2 point(const IFSSystem& ifs) const { return canonical_project(ifs, prefix, tail).point; }
  int letter(size_t k) const {  // 0-based position in the infinite word
    return k < prefix.length() ? prefix.at(k) : tail.at((k - prefix.length()) % tail.length());
  }
  FiniteWord truncated(size_t n) const {
    FiniteWord w;
    w.letters.reserve(n);
    for (size_t k = 0; k < n; ++k) w.letters.push_back(letter(k));
    return w;
  }
};

struct Screen {
  Vec2 center;
  double radius = 0.0;
  int level = 0;
  FiniteWord word_at_level;
  Mat2 rotation = Mat2::identity();  // takes theta1 -> (1,0), theta2 -> (0,1)
  double log_alpha2 = 0.0;           // of A_{i|t}; 0 at level 0

  Vec2 to_screen(const Vec2& scene) const { return rotation * ((scene - center) / radius); }
  Vec2 to_scene(const Vec2& screen) const {
    return center + (rotation.transpose() * screen) * radius;
  }
};

struct ScreenError : std::runtime_error {
  double band;
  explicit ScreenError(const std::string& what, double band_width)
      : std::runtime_error(what), band(band_width) {}
};

// Largest n such that B(x,t) meets exactly one level-n cylinder.
Screen construction_level(const IFSSystem& ifs, const ZoomPoint& zp, double t);

PointCloud scenery(const IFSSystem& ifs, const ZoomPoint& zp, double t, int samples, bool rotate,
                   uint64_t seed, uint64_t stream);

// Axis-aligned rectangle in screen coordinates.
struct ScreenRect {
  Vec2 center;
  double half_w = 0.0;
  double half_h = 0.0;

  Interval x_iv() const { return {center.x - half_w, center.x + half_w}; }
  Interval y_iv() const { return {center.y - half_h, center.y + half_h}; }
};

struct ApproxScenery {
  Screen screen;
  std::vector<ScreenRect> rectangles;
  std::vector<FiniteWord> words;  // the j in R(i,t,K)
  int K = 0;
  PointCloud sampled_screen;  // M_{i,t}
};

ApproxScenery approx_scenery(const IFSSystem& ifs, const ZoomPoint& zp, double t, int K,
                             int samples = 2000, uint64_t seed = 1, uint64_t stream = 0);

// epsilon(K) = L * delta^{-1} * alpha_hi^K, conservative since the
// certified delta lower bound is used.
double epsilon_bound(const IFSSystem& ifs, int K);

struct Pattern {
  bool is_pattern = false;
  std::vector<Interval> intervals;  // the I_i, screen units
  double epsilon_used = 0.0;
  std::string witness;  // failure evidence
};

Pattern detect_pattern(const std::vector<ScreenRect>& rects, double epsilon,
                       double span_slack = 0.05);
Pattern detect_pattern(const PointCloud& cloud, double epsilon, double span_slack = 0.05);

}  // namespace tl
