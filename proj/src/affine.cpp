#include "affine.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

#include "svd2.hpp"

namespace tl {

AffineMap2::AffineMap2(const Mat2& A, const Vec2& b, bool checked) : matrix(A), translation(b) {
  if (!checked) return;
  if (std::abs(A.det()) <= 1e-14) throw std::domain_error("affine map matrix is singular");
  if (svd2(A).s1 >= 1.0 - 1e-12) throw std::domain_error("affine map is not contractive");
}

Vec2 AffineMap2::fixed_point() const {
  Mat2 IA{1.0 - matrix.a, -matrix.b, -matrix.c, 1.0 - matrix.d};
  double dt = IA.det();
  if (std::abs(dt) < 1e-14) throw std::runtime_error("fixed point system is ill conditioned");
  return IA.inverse() * translation;
}

AffineMap2 compose_along(const IFSSystem& ifs, const FiniteWord& word) {
  word.validate(ifs.m());
  AffineMap2 out = AffineMap2::identity();
  for (int letter : word.letters) out = out.compose(ifs.map(letter));
  return out;
}

ProjectedPoint canonical_project(const IFSSystem& ifs, const FiniteWord& prefix, int tail) {
  return canonical_project(ifs, prefix, FiniteWord({tail}));
}

ProjectedPoint canonical_project(const IFSSystem& ifs, const FiniteWord& prefix,
                                 const FiniteWord& tail) {
  prefix.validate(ifs.m());
  tail.validate(ifs.m());
  if (tail.empty()) throw std::domain_error("canonical_project: empty tail");
  Vec2 p = compose_along(ifs, tail).fixed_point();
  for (size_t k = prefix.length(); k-- > 0;) p = ifs.map(prefix.at(k))(p);
  return {p, 0.0};
}

IFSSystem::IFSSystem(std::vector<AffineMap2> maps, int separation_depth)
    : maps_(std::move(maps)) {
  if (maps_.size() < 2) throw std::domain_error("an IFS needs at least two maps");
  derive_constants(separation_depth);
}

Box2 IFSSystem::cylinder_box(const FiniteWord& word) const {
  Box2 box = bbox_;
  for (size_t k = word.length(); k-- > 0;) {
    const AffineMap2& f = map(word.at(k));
    box = affine_image_box(f.matrix, f.translation, box);
  }
  return box;
}

PointCloud attractor_sample(const IFSSystem& ifs, int depth, int count, uint64_t seed,
                            uint64_t stream) {
  if (depth < 1 || count < 1) throw std::domain_error("attractor_sample needs depth, count >= 1");
  PointCloud cloud;
  cloud.frame = Frame::Scene;
  cloud.points.reserve(static_cast<size_t>(count));
  RngStream rng(seed, stream);
  int m = ifs.m();
  std::vector<int> w(static_cast<size_t>(depth));
  for (int s = 0; s < count; ++s) {
    for (int k = 0; k < depth; ++k)
      w[static_cast<size_t>(k)] = 1 + static_cast<int>(rng.uniform_index(static_cast<uint64_t>(m)));
    Vec2 p = ifs.anchor();
    for (int k = depth; k-- > 0;) p = ifs.map(w[static_cast<size_t>(k)])(p);
    cloud.points.push_back(p);
  }
  return cloud;
}

std::vector<std::pair<FiniteWord, Vec2>> attractor_sample_words(const IFSSystem& ifs, int depth,
                                                                int count, uint64_t seed,
                                                                uint64_t stream) {
  std::vector<std::pair<FiniteWord, Vec2>> out;
  out.reserve(static_cast<size_t>(count));
  RngStream rng(seed, stream);
  int m = ifs.m();
  for (int s = 0; s < count; ++s) {
    FiniteWord w;
    w.letters.reserve(static_cast<size_t>(depth));
    for (int k = 0; k < depth; ++k)
      w.letters.push_back(1 + static_cast<int>(rng.uniform_index(static_cast<uint64_t>(m))));
    Vec2 p = ifs.anchor();
    for (size_t k = w.length(); k-- > 0;) p = ifs.map(w.at(k))(p);
    out.emplace_back(std::move(w), p);
  }
  return out;
}

namespace {

std::array<Vec2, 4> mapped_corners(const AffineMap2& f, const Box2& box) {
  std::array<Vec2, 4> out;
  auto cs = box.corners();
  for (size_t k = 0; k < 4; ++k) out[k] = f(cs[k]);
  return out;
}

Interval project_corners(const std::array<Vec2, 4>& cs, const Vec2& dir) {
  Interval out{cs[0].dot(dir), cs[0].dot(dir)};
  for (size_t k = 1; k < 4; ++k) {
    double v = cs[k].dot(dir);
    out.lo = std::min(out.lo, v);
    out.hi = std::max(out.hi, v);
  }
  return out;
}

void enumerate_suffixes(int m, int depth, FiniteWord& cur, std::vector<FiniteWord>& out) {
  if (depth == 0) {
    out.push_back(cur);
    return;
  }
  for (int a = 1; a <= m; ++a) {
    cur.letters.push_back(a);
    enumerate_suffixes(m, depth - 1, cur, out);
    cur.letters.pop_back();
  }
}

}  // namespace

CylinderCover cylinder_cover(const IFSSystem& ifs, const FiniteWord& word, int depth) {
  word.validate(ifs.m());
  if (depth < 0) throw std::domain_error("cylinder_cover depth must be >= 0");
  CylinderCover cover;
  AffineMap2 fw = compose_along(ifs, word);
  if (!word.empty()) {
    Svd2 sv = svd2(fw.matrix);
    cover.theta1 = sv.u1;
    cover.theta2 = sv.u2;
  }
  auto outer_corners = mapped_corners(fw, ifs.bbox());
  cover.outer.suffix = FiniteWord{};
  cover.outer.along1 = project_corners(outer_corners, cover.theta1);
  cover.outer.along2 = project_corners(outer_corners, cover.theta2);

  std::vector<FiniteWord> suffixes;
  FiniteWord cur;
  enumerate_suffixes(ifs.m(), depth, cur, suffixes);
  if (depth > 0) {
    for (const FiniteWord& u : suffixes) {
      AffineMap2 fwu = fw.compose(compose_along(ifs, u));
      auto cs = mapped_corners(fwu, ifs.bbox());
      CoverRect r;
      r.suffix = u;
      r.along1 = project_corners(cs, cover.theta1);
      r.along2 = project_corners(cs, cover.theta2);
      cover.refined.push_back(std::move(r));
    }
  }
  return cover;
}

namespace {

struct SepNode {
  FiniteWord a, b;
  Box2 box_a, box_b;
};

}  // namespace

SeparationReport strong_separation(const IFSSystem& ifs, int depth) {
  if (depth < 1) throw std::domain_error("strong_separation depth must be >= 1");
  SeparationReport rep;
  int m = ifs.m();

  std::vector<FiniteWord> base;
  FiniteWord cur;
  enumerate_suffixes(m, depth, cur, base);

  double best = HUGE_VAL;
  std::deque<SepNode> ambiguous;
  for (size_t i = 0; i < base.size(); ++i) {
    for (size_t j = i + 1; j < base.size(); ++j) {
      if (base[i].at(0) == base[j].at(0)) continue;  // only cross-letter separation matters
      SepNode node{base[i], base[j], ifs.cylinder_box(base[i]), ifs.cylinder_box(base[j])};
      double d = node.box_a.dist(node.box_b);
      if (d > 0)
        best = std::min(best, d);
      else
        ambiguous.push_back(std::move(node));
    }
  }

  // Refine overlapping pairs; cylinders shrink geometrically so either a
  // positive gap or persistent overlap emerges quickly.
  const int max_extra = 18;
  const size_t budget = 200000;
  size_t expansions = 0;
  int extra = 0;
  while (!ambiguous.empty() && extra < max_extra && expansions < budget) {
    std::deque<SepNode> next;
    for (SepNode& node : ambiguous) {
      for (int a = 1; a <= m; ++a) {
        FiniteWord wa = node.a.append(a);
        Box2 ba = ifs.cylinder_box(wa);
        for (int b = 1; b <= m; ++b) {
          FiniteWord wb = node.b.append(b);
          Box2 bb = ifs.cylinder_box(wb);
          ++expansions;
          double d = ba.dist(bb);
          if (d > 0)
            best = std::min(best, d);
          else
            next.push_back(SepNode{wa, wb, ba, bb});
        }
      }
    }
    ambiguous.swap(next);
    ++extra;
  }

  if (ambiguous.empty()) {
    rep.kind = SeparationReport::Kind::Certified;
    rep.delta_lb = best;
    return rep;
  }

  // Persistent overlap: look for shared attractor-point evidence.
  for (const SepNode& node : ambiguous) {
    Vec2 pa = ifs.anchor();
    for (size_t k = node.a.length(); k-- > 0;) pa = ifs.map(node.a.at(k))(pa);
    Vec2 pb = ifs.anchor();
    for (size_t k = node.b.length(); k-- > 0;) pb = ifs.map(node.b.at(k))(pb);
    if ((pa - pb).norm() <= 1e-9 * (ifs.diam() + 1.0)) {
      rep.kind = SeparationReport::Kind::Violated;
      rep.witness_a = node.a;
      rep.witness_b = node.b;
      rep.witness_point = pa;
      return rep;
    }
  }

  rep.kind = SeparationReport::Kind::Undecided;
  double band = 0.0;
  for (const SepNode& node : ambiguous) band = std::max(band, node.box_a.hull(node.box_b).diam());
  rep.band = band;
  return rep;
}

void IFSSystem::derive_constants(int separation_depth) {
  alpha_lo_ = HUGE_VAL;
  alpha_hi_ = 0.0;
  for (const AffineMap2& f : maps_) {
    Svd2 sv = svd2(f.matrix);
    alpha_lo_ = std::min(alpha_lo_, sv.s2);
    alpha_hi_ = std::max(alpha_hi_, sv.s1);
  }

  // Certified bounding box: grow an invariant box, then tighten by
  // iterating the outer hull map.
  double maxb = 0.0;
  for (const AffineMap2& f : maps_)
    maxb = std::max({maxb, std::abs(f.translation.x), std::abs(f.translation.y)});
  double radius = (maxb + 1.0) / (1.0 - alpha_hi_);
  Box2 box{{-radius, radius}, {-radius, radius}};
  auto image_hull = [&](const Box2& b) {
    Box2 out = affine_image_box(maps_[0].matrix, maps_[0].translation, b);
    for (size_t i = 1; i < maps_.size(); ++i)
      out = out.hull(affine_image_box(maps_[i].matrix, maps_[i].translation, b));
    return out;
  };
  for (int guard = 0; guard < 64 && !box.contains(image_hull(box)); ++guard) {
    radius *= 2.0;
    box = Box2{{-radius, radius}, {-radius, radius}};
  }
  for (int it = 0; it < 60; ++it) box = image_hull(box);
  // Re-establish invariance lost to outward rounding.
  for (int guard = 0; guard < 8 && !box.contains(image_hull(box)); ++guard)
    box = box.hull(image_hull(box));
  bbox_ = box;

  anchor_ = maps_[0].fixed_point();

  // delta lower bound: take the first depth at which separation certifies.
  separation_ = strong_separation(*this, separation_depth);
  for (int d = separation_depth + 1;
       separation_.kind == SeparationReport::Kind::Undecided && d <= 6; ++d)
    separation_ = strong_separation(*this, d);
  if (separation_.kind == SeparationReport::Kind::Certified) delta_lb_ = separation_.delta_lb;

  // L estimate: containment ball around the sample centroid plus an
  // inscribed ball found by grid search over the sampled convex hull.
  auto cloud = attractor_sample(*this, 30, 4096, 0x5eedULL, 0);
  Vec2 centroid{0, 0};
  for (const Vec2& p : cloud.points) centroid = centroid + p;
  centroid = centroid / static_cast<double>(cloud.points.size());
  double maxdist = 0.0;
  for (const Vec2& p : cloud.points) maxdist = std::max(maxdist, (p - centroid).norm());

  std::vector<Vec2> hull = convex_hull(cloud.points);
  double step = diam() / 64.0;
  double r_in = 0.0;
  if (hull.size() >= 3 && step > 0) {
    for (double x = bbox_.x.lo; x <= bbox_.x.hi; x += step) {
      for (double y = bbox_.y.lo; y <= bbox_.y.hi; y += step) {
        Vec2 p{x, y};
        if (!point_in_convex(hull, p)) continue;
        r_in = std::max(r_in, dist_to_polygon_boundary(hull, p));
      }
    }
  }
  double need = std::max(maxdist, r_in > 0 ? 1.0 / r_in : 1.0);
  L_est_ = std::max(1, static_cast<int>(std::ceil(need - 1e-12)));
}

}  // namespace tl
