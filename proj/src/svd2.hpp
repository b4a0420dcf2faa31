#pragma once

#include "geometry.hpp"

namespace tl {

// Exact factorization M = [u1 u2] diag(s1, s2) [v1 v2]^T with s1 >= s2 >= 0.
struct Svd2 {
  double s1 = 0, s2 = 0;
  Vec2 u1, u2;  // image (left) directions
  Vec2 v1, v2;  // domain (right) directions
  bool tie = false;
};

Svd2 svd2(const Mat2& M);

}  // namespace tl
