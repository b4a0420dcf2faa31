#pragma once

#include <optional>
#include <string>
#include <vector>

#include "affine.hpp"
#include "screens.hpp"
#include "symbolic.hpp"

namespace tl {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MapSpec {
  double a = 0, b = 0, c = 0, d = 0;
  double tx = 0, ty = 0;
};

struct RunConfig {
  std::string name;
  std::vector<MapSpec> maps;
  std::vector<double> weights;

  // zoom target: an address, or a plane point to be snapped to one
  std::optional<FiniteWord> zoom_prefix;
  FiniteWord zoom_tail{1};  // periodic part of the address
  std::optional<Vec2> zoom_point;

  std::vector<double> scales;
  int K = 3;
  int samples = 2000;
  uint64_t seed = 1;
  bool square_screen = false;
  std::string out_dir = "out";

  std::vector<AffineMap2> make_maps() const;
  IFSSystem make_system() const { return IFSSystem(make_maps()); }
  BernoulliWeights make_weights() const { return BernoulliWeights(weights); }
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

struct ResolvedZoom {
  ZoomPoint zp;
  double snap_distance = 0.0;  // 0 when the config gave an address
  bool snapped = false;
};

// Coordinate targets are snapped to the nearest point of a deep
// deterministic attractor sample; the address of that point is used.
ResolvedZoom resolve_zoom(const RunConfig& cfg, const IFSSystem& ifs);

}  // namespace tl
