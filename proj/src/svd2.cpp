#include "svd2.hpp"

#include <cmath>

namespace tl {

// Right directions from the symmetric eigenproblem of M^T M, left
// directions by pushing them through M. The small singular value falls
// back to the determinant identity when the direct norm cancels.
Svd2 svd2(const Mat2& M) {
  Svd2 out;
  // S = M^T M = [[p, q], [q, r]]
  double p = M.a * M.a + M.c * M.c;
  double q = M.a * M.b + M.c * M.d;
  double r = M.b * M.b + M.d * M.d;

  double scale = p + r;
  out.tie = scale > 0 && std::abs(p - r) <= 1e-14 * scale && std::abs(q) <= 1e-14 * scale;

  double phi = out.tie ? 0.0 : 0.5 * std::atan2(2.0 * q, p - r);
  out.v1 = {std::cos(phi), std::sin(phi)};
  out.v2 = {-out.v1.y, out.v1.x};

  Vec2 mv1 = M * out.v1;
  out.s1 = mv1.norm();
  if (out.s1 > 0) {
    out.u1 = mv1 / out.s1;
  } else {
    out.u1 = {1, 0};
  }

  Vec2 mv2 = M * out.v2;
  double s2_direct = mv2.norm();
  if (s2_direct > 1e-6 * out.s1) {
    out.s2 = s2_direct;
    out.u2 = mv2 / s2_direct;
  } else {
    // M v2 is orthogonal to M v1; recover its direction from u1.
    out.u2 = {-out.u1.y, out.u1.x};
    double s = out.u2.dot(mv2);
    if (s < 0) {
      out.u2 = out.u2 * -1.0;
      s = -s;
    }
    out.s2 = out.s1 > 0 ? std::abs(M.det()) / out.s1 : 0.0;
  }
  if (out.s2 > out.s1) {
    std::swap(out.s1, out.s2);
    std::swap(out.u1, out.u2);
    std::swap(out.v1, out.v2);
  }
  return out;
}

}  // namespace tl
