#include "screens.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <sstream>

namespace tl {

namespace {

struct Node {
  FiniteWord word;
  AffineMap2 map = AffineMap2::identity();
  Box2 outer;  // rigorous outer box of E_word
};

Node make_node(const IFSSystem& ifs, const Node& parent, int letter) {
  Node n;
  n.word = parent.word.append(letter);
  n.map = parent.map.compose(ifs.map(letter));
  n.outer = affine_image_box(n.map.matrix, n.map.translation, ifs.bbox());
  return n;
}

enum class Hit { Yes, No, Unknown };

// Decide dist(x, E_word) <= t by branch and bound: outer boxes give
// lower bounds, anchor images give attainable upper bounds.
Hit hits_ball(const IFSSystem& ifs, const Node& start, const Vec2& x, double t,
              int budget = 20000) {
  auto cmp = [](const std::pair<double, Node>& a, const std::pair<double, Node>& b) {
    return a.first > b.first;
  };
  std::priority_queue<std::pair<double, Node>, std::vector<std::pair<double, Node>>, decltype(cmp)>
      pq(cmp);
  pq.push({start.outer.dist(x), start});
  while (!pq.empty() && budget-- > 0) {
    auto [lb, node] = pq.top();
    pq.pop();
    if (lb > t) return Hit::No;  // best lower bound already too far
    if ((node.map(ifs.anchor()) - x).norm() <= t) return Hit::Yes;
    for (int a = 1; a <= ifs.m(); ++a) {
      Node child = make_node(ifs, node, a);
      double clb = child.outer.dist(x);
      if (clb <= t) pq.push({clb, child});
    }
    if (pq.empty()) return Hit::No;
  }
  return Hit::Unknown;
}

}  // namespace

Screen construction_level(const IFSSystem& ifs, const ZoomPoint& zp, double t) {
  if (!(t > 0)) throw std::domain_error("construction_level: scale must be positive");
  if (!ifs.delta_lb())
    throw std::domain_error("construction_level: strong separation not certified");
  zp.prefix.validate(ifs.m());
  zp.tail.validate(ifs.m());
  if (zp.tail.empty()) throw std::domain_error("construction_level: empty tail");

  Vec2 x = zp.point(ifs);
  Node root;
  root.outer = ifs.bbox();
  std::vector<Node> frontier{root};
  int level = 0;  // deepest verified exactly-one level

  for (int n = 1; n <= 5000; ++n) {
    std::vector<Node> next;
    for (const Node& node : frontier)
      for (int a = 1; a <= ifs.m(); ++a) {
        Node child = make_node(ifs, node, a);
        if (child.outer.dist(x) <= t) next.push_back(child);
      }
    if (next.empty())
      throw ScreenError("construction_level: lost the address cylinder", t);

    if (next.size() > 1) {
      // More than one candidate: resolve which truly meet the ball.
      int certain = 0;
      std::vector<Node> alive;
      double band = std::numeric_limits<double>::infinity();
      bool unknown = false;
      for (Node& node : next) {
        Hit h = hits_ball(ifs, node, x, t);
        if (h == Hit::Yes) {
          ++certain;
          alive.push_back(node);
        } else if (h == Hit::Unknown) {
          unknown = true;
          band = std::min(band, std::abs(node.outer.dist(x) - t));
          alive.push_back(node);
        }
      }
      if (certain >= 2) break;  // level n fails, keep previous
      if (alive.size() >= 2 && unknown) {
        std::ostringstream msg;
        msg << "construction_level: undecidable at level " << n << " (scale " << t
            << " sits in an ambiguity band of width ~" << band << ")";
        throw ScreenError(msg.str(), band);
      }
      next = std::move(alive);
    }
    level = n;
    frontier = std::move(next);
  }

  Screen s;
  s.center = x;
  s.radius = t;
  s.level = level;
  s.word_at_level = zp.truncated(static_cast<size_t>(level));
  if (level >= 1) {
    SingularFrame fr = singular_frame(ifs, s.word_at_level);
    s.rotation = Mat2{fr.theta1.x, fr.theta1.y, fr.theta2.x, fr.theta2.y};
    s.log_alpha2 = fr.log_alpha2;
  }
  return s;
}

namespace {

// Enumerate sub-cylinders of `start` meeting B(x,t), splitting until the
// outer box diameter drops below `resolution`.
std::vector<Node> enumerate_leaves(const IFSSystem& ifs, const Node& start, const Vec2& x,
                                   double t, double resolution, size_t cap = 40000) {
  std::vector<Node> leaves;
  std::deque<Node> work{start};
  while (!work.empty()) {
    Node node = std::move(work.front());
    work.pop_front();
    if (node.outer.dist(x) > t) continue;
    if (node.outer.diam() <= resolution || leaves.size() + work.size() >= cap) {
      leaves.push_back(std::move(node));
      continue;
    }
    for (int a = 1; a <= ifs.m(); ++a) work.push_back(make_node(ifs, node, a));
  }
  return leaves;
}

Node node_for_word(const IFSSystem& ifs, const FiniteWord& word) {
  Node n;
  n.word = word;
  n.map = compose_along(ifs, word);
  n.outer = affine_image_box(n.map.matrix, n.map.translation, ifs.bbox());
  return n;
}

}  // namespace

PointCloud scenery(const IFSSystem& ifs, const ZoomPoint& zp, double t, int samples, bool rotate,
                   uint64_t seed, uint64_t stream) {
  if (samples < 1) throw std::domain_error("scenery: samples must be positive");
  Screen screen = construction_level(ifs, zp, t);
  Vec2 x = screen.center;

  Node base = node_for_word(ifs, screen.word_at_level);
  std::vector<Node> leaves = enumerate_leaves(ifs, base, x, t, 0.05 * t);
  if (leaves.empty()) throw ScreenError("scenery: no cylinder meets the screen", t);

  RngStream rng(seed, stream);
  PointCloud cloud;
  cloud.frame = Frame::Screen;
  cloud.points.reserve(static_cast<size_t>(samples));
  double log_hi = std::log(ifs.alpha_hi());

  for (int s = 0; s < samples; ++s) {
    bool got = false;
    for (int attempt = 0; attempt < 30 && !got; ++attempt) {
      const Node& leaf = leaves[(static_cast<size_t>(s) * 31 + static_cast<size_t>(attempt)) %
                                leaves.size()];
      double need = std::log(1e-3 * t / std::max(leaf.outer.diam(), 1e-300)) / log_hi;
      int extra = static_cast<int>(std::clamp(std::ceil(need), 1.0, 80.0));
      std::vector<int> suffix(static_cast<size_t>(extra));
      for (int& l : suffix) l = 1 + static_cast<int>(rng.uniform_index(ifs.m()));
      Vec2 p = ifs.anchor();
      for (auto it = suffix.rbegin(); it != suffix.rend(); ++it) p = ifs.map(*it)(p);
      p = leaf.map(p);
      if ((p - x).norm() <= t) {
        Vec2 z = (p - x) / t;
        cloud.points.push_back(rotate ? screen.rotation * z : z);
        got = true;
      }
    }
    if (!got) cloud.partial = true;
  }
  return cloud;
}

ApproxScenery approx_scenery(const IFSSystem& ifs, const ZoomPoint& zp, double t, int K,
                             int samples, uint64_t seed, uint64_t stream) {
  if (K < 0) throw std::domain_error("approx_scenery: K must be non-negative");
  ApproxScenery out;
  out.K = K;
  out.screen = construction_level(ifs, zp, t);
  const Screen& sc = out.screen;

  // All K-step refinements below i|t whose cover can meet B(x,t).
  std::deque<Node> work{node_for_word(ifs, sc.word_at_level)};
  size_t base_len = sc.word_at_level.length();
  while (!work.empty()) {
    Node node = std::move(work.front());
    work.pop_front();
    if (node.outer.dist(sc.center) > t) continue;
    if (node.word.length() == base_len + static_cast<size_t>(K)) {
      Interval ix{HUGE_VAL, -HUGE_VAL}, iy{HUGE_VAL, -HUGE_VAL};
      for (const Vec2& corner : ifs.bbox().corners()) {
        Vec2 s = sc.to_screen(node.map(corner));
        ix = {std::min(ix.lo, s.x), std::max(ix.hi, s.x)};
        iy = {std::min(iy.lo, s.y), std::max(iy.hi, s.y)};
      }
      ScreenRect r;
      r.center = {ix.mid(), iy.mid()};
      r.half_w = 0.5 * ix.length();
      r.half_h = 0.5 * iy.length();
      out.rectangles.push_back(r);
      FiniteWord suffix;
      suffix.letters.assign(node.word.letters.begin() + static_cast<long>(base_len),
                            node.word.letters.end());
      out.words.push_back(std::move(suffix));
      continue;
    }
    for (int a = 1; a <= ifs.m(); ++a) work.push_back(make_node(ifs, node, a));
  }

  out.sampled_screen = scenery(ifs, zp, t, samples, true, seed, stream);
  return out;
}

double epsilon_bound(const IFSSystem& ifs, int K) {
  if (K < 0) throw std::domain_error("epsilon_bound: K must be non-negative");
  auto delta = ifs.delta_lb();
  if (!delta) throw std::domain_error("epsilon_bound: no certified separation constant");
  return ifs.L_est() * std::pow(ifs.alpha_hi(), K) / *delta;
}

namespace {

Pattern pattern_from_boxes(std::vector<Interval> ys,
                           const std::vector<std::pair<Interval, Interval>>& xy,
                           double epsilon, double span_slack, double merge_tol) {
  Pattern pat;
  pat.epsilon_used = epsilon;
  pat.intervals = merge_intervals(std::move(ys), merge_tol);
  pat.is_pattern = true;

  // Horizontal extent of the whole geometry. Band-by-band coverage is
  // too strict at reachable scales: a single anisotropic refinement can
  // own a height band without yet spanning it, while the fibered limit
  // is governed by the projection of the visible cylinder.
  std::vector<Interval> spans;
  for (const auto& [xi, yi] : xy) spans.push_back(xi);
  spans = merge_intervals(std::move(spans), span_slack);

  for (const Interval& band : pat.intervals) {
    if (!(band.length() < epsilon)) {
      pat.is_pattern = false;
      std::ostringstream msg;
      msg << "band [" << band.lo << ", " << band.hi << "] has height " << band.length()
          << " >= epsilon " << epsilon;
      pat.witness = msg.str();
      return pat;
    }
    // Chord of the unit ball at the band's height must be covered by one
    // connected piece of the horizontal extent.
    double ym = band.mid();
    double w = std::sqrt(std::max(0.0, 1.0 - ym * ym));
    double need = w - span_slack;
    if (need <= 0) continue;
    bool covered = false;
    for (const Interval& piece : spans)
      if (piece.lo <= -need && need <= piece.hi) covered = true;
    if (!covered) {
      pat.is_pattern = false;
      std::ostringstream msg;
      msg << "band [" << band.lo << ", " << band.hi << "] does not span the chord [-" << need
          << ", " << need << "]";
      pat.witness = msg.str();
      return pat;
    }
  }
  return pat;
}

}  // namespace

Pattern detect_pattern(const std::vector<ScreenRect>& rects, double epsilon, double span_slack) {
  if (!(epsilon > 0)) throw std::domain_error("detect_pattern: epsilon must be positive");
  std::vector<Interval> ys;
  std::vector<std::pair<Interval, Interval>> xy;
  for (const ScreenRect& r : rects) {
    ys.push_back(r.y_iv());
    xy.push_back({r.x_iv(), r.y_iv()});
  }
  if (xy.empty()) {
    Pattern pat;
    pat.epsilon_used = epsilon;
    pat.witness = "no rectangles";
    return pat;
  }
  return pattern_from_boxes(std::move(ys), xy, epsilon, span_slack, 0.0);
}

Pattern detect_pattern(const PointCloud& cloud, double epsilon, double span_slack) {
  if (!(epsilon > 0)) throw std::domain_error("detect_pattern: epsilon must be positive");
  std::vector<Interval> ys;
  std::vector<std::pair<Interval, Interval>> xy;
  for (const Vec2& p : cloud.points) {
    ys.push_back({p.y, p.y});
    xy.push_back({Interval{p.x, p.x}, Interval{p.y, p.y}});
  }
  if (xy.empty()) {
    Pattern pat;
    pat.epsilon_used = epsilon;
    pat.witness = "empty cloud";
    return pat;
  }
  // Points need a bucketing tolerance to cohere into bands.
  return pattern_from_boxes(std::move(ys), xy, epsilon, span_slack, 0.25 * epsilon);
}

}  // namespace tl
