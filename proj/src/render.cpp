#include "render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>

namespace tl {

namespace {

constexpr uint8_t kPalette[5] = {255, 230, 172, 114, 56};  // background, level n .. n+3

struct Drawable {
  AffineMap2 inverse = AffineMap2::identity();
  int depth = 0;  // 1..4 => levels n..n+3
  Box2 screen_box;
};

AffineMap2 invert(const AffineMap2& f) {
  Mat2 inv = f.matrix.inverse();
  return AffineMap2(inv, (inv * f.translation) * -1.0, false);
}

}  // namespace

FrameImage render_frame(const IFSSystem& ifs, const Screen& screen, bool square_screen,
                        int size) {
  FrameImage img;
  img.width = img.height = size;
  img.gray.assign(static_cast<size_t>(size) * size, kPalette[0]);
  std::vector<uint8_t> depth_buf(img.gray.size(), 0);

  // Cylinders of levels n .. n+3 below the screen word, clipped to the view.
  double view_radius = screen.radius * std::sqrt(2.0) * 1.01;
  std::vector<Drawable> drawables;
  AffineMap2 base = compose_along(ifs, screen.word_at_level);
  std::deque<std::pair<AffineMap2, int>> work{{base, 1}};
  while (!work.empty()) {
    auto [map, depth] = std::move(work.front());
    work.pop_front();
    Box2 box = affine_image_box(map.matrix, map.translation, ifs.bbox());
    if (box.dist(screen.center) > view_radius) continue;
    Drawable d;
    d.inverse = invert(map);
    d.depth = depth;
    Interval sx{HUGE_VAL, -HUGE_VAL}, sy{HUGE_VAL, -HUGE_VAL};
    for (const Vec2& c : box.corners()) {
      Vec2 s = screen.to_screen(c);
      sx = {std::min(sx.lo, s.x), std::max(sx.hi, s.x)};
      sy = {std::min(sy.lo, s.y), std::max(sy.hi, s.y)};
    }
    d.screen_box = {sx, sy};
    drawables.push_back(d);
    if (depth < 4)
      for (int a = 1; a <= ifs.m(); ++a) work.push_back({map.compose(ifs.map(a)), depth + 1});
  }

  auto px_of = [size](double sx) { return (sx + 1.0) * 0.5 * size - 0.5; };
  for (const Drawable& d : drawables) {
    int px_lo = std::max(0, static_cast<int>(std::floor(px_of(d.screen_box.x.lo))));
    int px_hi = std::min(size - 1, static_cast<int>(std::ceil(px_of(d.screen_box.x.hi))));
    int py_lo = std::max(0, static_cast<int>(std::floor(px_of(-d.screen_box.y.hi))));
    int py_hi = std::min(size - 1, static_cast<int>(std::ceil(px_of(-d.screen_box.y.lo))));
    for (int py = py_lo; py <= py_hi; ++py)
      for (int px = px_lo; px <= px_hi; ++px) {
        size_t idx = static_cast<size_t>(py) * size + px;
        if (depth_buf[idx] >= d.depth) continue;
        Vec2 s{(px + 0.5) / size * 2.0 - 1.0, 1.0 - (py + 0.5) / size * 2.0};
        Vec2 scene = screen.to_scene(s);
        if (ifs.bbox().contains(d.inverse(scene))) {
          depth_buf[idx] = static_cast<uint8_t>(d.depth);
          img.gray[idx] = kPalette[d.depth];
        }
      }
  }

  if (!square_screen) {
    for (int py = 0; py < size; ++py)
      for (int px = 0; px < size; ++px) {
        Vec2 s{(px + 0.5) / size * 2.0 - 1.0, 1.0 - (py + 0.5) / size * 2.0};
        if (s.norm() > 1.0) img.gray[static_cast<size_t>(py) * size + px] = kPalette[0];
      }
  }
  return img;
}

void write_ppm(const std::string& path, const FrameImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "P6\n" << img.width << " " << img.height << "\n255\n";
  for (uint8_t g : img.gray) {
    char rgb[3] = {static_cast<char>(g), static_cast<char>(g), static_cast<char>(g)};
    out.write(rgb, 3);
  }
}

std::string frame_filename(double scale) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "frame_%.6g.ppm", scale);
  return buf;
}

}  // namespace tl
