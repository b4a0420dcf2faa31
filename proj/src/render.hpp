#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "screens.hpp"

namespace tl {

struct FrameImage {
  int width = 512;
  int height = 512;
  std::vector<uint8_t> gray;  // row major, top row first
};

// Cylinder shading of B(x,t): the level-n(x,t) cylinder is lightest and
// each of the next three refinement levels darker, on a fixed 5-value
// palette (background included).
FrameImage render_frame(const IFSSystem& ifs, const Screen& screen, bool square_screen,
                        int size = 512);

void write_ppm(const std::string& path, const FrameImage& img);

std::string frame_filename(double scale);

}  // namespace tl
