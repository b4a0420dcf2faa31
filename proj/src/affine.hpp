#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "symbolic.hpp"

namespace tl {

// One contractive invertible planar affine map x -> A x + b.
struct AffineMap2 {
  Mat2 matrix;
  Vec2 translation;

  AffineMap2(const Mat2& A, const Vec2& b, bool checked = true);
  static AffineMap2 identity() { return AffineMap2(Mat2::identity(), Vec2{0, 0}, false); }

  Vec2 operator()(const Vec2& p) const { return matrix * p + translation; }
  AffineMap2 compose(const AffineMap2& inner) const {
    return AffineMap2(matrix * inner.matrix, matrix * inner.translation + translation, false);
  }
  Vec2 fixed_point() const;
};

enum class Frame { Scene, Screen };

struct PointCloud {
  std::vector<Vec2> points;
  Frame frame = Frame::Scene;
  bool partial = false;  // fewer points delivered than requested
};

struct SeparationReport {
  enum class Kind { Certified, Violated, Undecided } kind = Kind::Undecided;
  double delta_lb = 0.0;              // Certified: lower bound for delta
  FiniteWord witness_a, witness_b;    // Violated: overlapping cylinders
  Vec2 witness_point;                 // Violated: shared attractor point
  double band = 0.0;                  // Undecided: ambiguous band width
};

// Rectangle in the singular basis of a base word: intervals of p·theta1
// and p·theta2 over the covered cylinder.
struct CoverRect {
  FiniteWord suffix;
  Interval along1;
  Interval along2;

  double h() const { return along1.length(); }
  double v() const { return along2.length(); }
};

struct CylinderCover {
  Vec2 theta1{1, 0};
  Vec2 theta2{0, 1};
  CoverRect outer;
  std::vector<CoverRect> refined;
};

class IFSSystem {
 public:
  explicit IFSSystem(std::vector<AffineMap2> maps, int separation_depth = 1);

  int m() const { return static_cast<int>(maps_.size()); }
  const AffineMap2& map(int letter) const { return maps_[static_cast<size_t>(letter - 1)]; }
  const std::vector<AffineMap2>& maps() const { return maps_; }

  double alpha_lo() const { return alpha_lo_; }  // min_i alpha_2(i)
  double alpha_hi() const { return alpha_hi_; }  // max_i alpha_1(i)
  const Box2& bbox() const { return bbox_; }
  double diam() const { return bbox_.diam(); }
  const Vec2& anchor() const { return anchor_; }  // fixed point of f_1, a point of E
  std::optional<double> delta_lb() const { return delta_lb_; }
  int L_est() const { return L_est_; }
  const SeparationReport& separation() const { return separation_; }

  // Outer axis-aligned box of the cylinder E_word (rigorous).
  Box2 cylinder_box(const FiniteWord& word) const;

 private:
  void derive_constants(int separation_depth);

  std::vector<AffineMap2> maps_;
  double alpha_lo_ = 0.0;
  double alpha_hi_ = 0.0;
  Box2 bbox_;
  Vec2 anchor_;
  std::optional<double> delta_lb_;
  int L_est_ = 1;
  SeparationReport separation_;
};

// f_word = f_{w(1)} ∘ ... ∘ f_{w(n)}; empty word gives the identity.
AffineMap2 compose_along(const IFSSystem& ifs, const FiniteWord& word);

// pi(prefix · tail^inf): f_prefix applied to the fixed point of f_tail.
// The value is exact for eventually-periodic words, so the error radius
// is 0 up to floating error.
struct ProjectedPoint {
  Vec2 point;
  double error_radius = 0.0;
};
ProjectedPoint canonical_project(const IFSSystem& ifs, const FiniteWord& prefix, int tail);
ProjectedPoint canonical_project(const IFSSystem& ifs, const FiniteWord& prefix,
                                 const FiniteWord& tail);

PointCloud attractor_sample(const IFSSystem& ifs, int depth, int count, uint64_t seed,
                            uint64_t stream);

// Same sample but keeping the generating words (used for snapping).
std::vector<std::pair<FiniteWord, Vec2>> attractor_sample_words(const IFSSystem& ifs, int depth,
                                                                int count, uint64_t seed,
                                                                uint64_t stream);

CylinderCover cylinder_cover(const IFSSystem& ifs, const FiniteWord& word, int depth);

SeparationReport strong_separation(const IFSSystem& ifs, int depth);

}  // namespace tl
