#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "screens.hpp"

namespace tl {

// Exact (non-symmetrized to max of both directions) Hausdorff distance
// between finite clouds in the same frame.
double hausdorff_distance(const PointCloud& a, const PointCloud& b);

enum class TangentClass { Fibered, Segment, Undetermined };

struct ScaleTraceRow {
  double scale = 0.0;
  int level = 0;
  double ratio = 0.0;  // alpha_2(i|t) / t
  bool pattern = false;
  double d_hausdorff = 0.0;
};

struct TangentReport {
  TangentClass cls = TangentClass::Undetermined;
  std::vector<ScaleTraceRow> trace;
  double epsilon = 0.0;                // epsilon(K) used throughout
  std::vector<Interval> fiber_set;     // Fibered: the detected I_i
  double porosity = 0.0;               // Fibered: estimate for the fiber set
  double deformation_bound = 0.0;      // Fibered: bilipschitz constant D
  Interval segment{0.0, 0.0};          // Segment: horizontal extent
  std::string note;
};

TangentReport modified_tangent(const IFSSystem& ifs, const ZoomPoint& zp,
                               const std::vector<double>& scales, int K, int samples,
                               uint64_t seed, uint64_t stream);

// Lower porosity estimate of a closed union of intervals inside [-1,1]:
// min over probe centers and radii of (largest hole radius)/r, snapped
// down to a dyadic grid.
double porosity_estimate(const std::vector<Interval>& fiber_set, std::vector<double> radii = {});

}  // namespace tl
