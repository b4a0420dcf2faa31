#include "config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace tl {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& why) {
  throw ConfigError(path + ": " + why);
}

double num_at(const json& j, const std::string& path) {
  if (!j.is_number()) bad(path, "expected a number");
  double v = j.get<double>();
  if (!std::isfinite(v)) bad(path, "must be finite");
  return v;
}

const json& field(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) bad(path + "." + key, "missing");
  return *it;
}

}  // namespace

std::vector<AffineMap2> RunConfig::make_maps() const {
  std::vector<AffineMap2> out;
  for (const MapSpec& s : maps)
    out.push_back(AffineMap2(Mat2{s.a, s.b, s.c, s.d}, Vec2{s.tx, s.ty}));
  return out;
}

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) bad("config", "expected a JSON object");

  RunConfig cfg;
  if (j.contains("name")) {
    if (!j["name"].is_string()) bad("name", "expected a string");
    cfg.name = j["name"].get<std::string>();
  }

  const json& maps = field(j, "config", "maps");
  if (!maps.is_array() || maps.size() < 2) bad("maps", "expected an array of at least 2 maps");
  for (size_t k = 0; k < maps.size(); ++k) {
    std::ostringstream p;
    p << "maps[" << k << "]";
    const json& mj = maps[k];
    if (!mj.is_object()) bad(p.str(), "expected an object");
    const json& mat = field(mj, p.str(), "matrix");
    const json& tr = field(mj, p.str(), "translation");
    if (!mat.is_array() || mat.size() != 4) bad(p.str() + ".matrix", "expected [a, b, c, d]");
    if (!tr.is_array() || tr.size() != 2) bad(p.str() + ".translation", "expected [x, y]");
    MapSpec s;
    s.a = num_at(mat[0], p.str() + ".matrix[0]");
    s.b = num_at(mat[1], p.str() + ".matrix[1]");
    s.c = num_at(mat[2], p.str() + ".matrix[2]");
    s.d = num_at(mat[3], p.str() + ".matrix[3]");
    s.tx = num_at(tr[0], p.str() + ".translation[0]");
    s.ty = num_at(tr[1], p.str() + ".translation[1]");
    cfg.maps.push_back(s);
  }

  const json& ws = field(j, "config", "weights");
  if (!ws.is_array() || ws.size() != cfg.maps.size())
    bad("weights", "expected one weight per map");
  for (size_t k = 0; k < ws.size(); ++k) {
    std::ostringstream p;
    p << "weights[" << k << "]";
    double w = num_at(ws[k], p.str());
    if (!(w > 0)) bad(p.str(), "must be positive");
    cfg.weights.push_back(w);
  }

  const json& zoom = field(j, "config", "zoom");
  if (!zoom.is_object()) bad("zoom", "expected an object");
  if (zoom.contains("point")) {
    const json& pt = zoom["point"];
    if (!pt.is_array() || pt.size() != 2) bad("zoom.point", "expected [x, y]");
    cfg.zoom_point = Vec2{num_at(pt[0], "zoom.point[0]"), num_at(pt[1], "zoom.point[1]")};
  } else {
    const json& pre = field(zoom, "zoom", "prefix");
    if (!pre.is_array()) bad("zoom.prefix", "expected an array of letters");
    FiniteWord w;
    for (size_t k = 0; k < pre.size(); ++k) {
      std::ostringstream p;
      p << "zoom.prefix[" << k << "]";
      if (!pre[k].is_number_integer()) bad(p.str(), "expected an integer letter");
      int l = pre[k].get<int>();
      if (l < 1 || l > static_cast<int>(cfg.maps.size())) bad(p.str(), "letter out of range");
      w.letters.push_back(l);
    }
    cfg.zoom_prefix = std::move(w);
    if (zoom.contains("tail")) {
      const json& tj = zoom["tail"];
      std::vector<int> tail;
      if (tj.is_number_integer()) {
        tail.push_back(tj.get<int>());
      } else if (tj.is_array() && !tj.empty()) {
        for (size_t k = 0; k < tj.size(); ++k) {
          std::ostringstream p;
          p << "zoom.tail[" << k << "]";
          if (!tj[k].is_number_integer()) bad(p.str(), "expected an integer letter");
          tail.push_back(tj[k].get<int>());
        }
      } else {
        bad("zoom.tail", "expected a letter or a non-empty array of letters");
      }
      for (int l : tail)
        if (l < 1 || l > static_cast<int>(cfg.maps.size())) bad("zoom.tail", "letter out of range");
      cfg.zoom_tail = FiniteWord(std::move(tail));
    }
  }

  const json& scales = field(j, "config", "scales");
  if (!scales.is_array() || scales.empty()) bad("scales", "expected a non-empty array");
  for (size_t k = 0; k < scales.size(); ++k) {
    std::ostringstream p;
    p << "scales[" << k << "]";
    double t = num_at(scales[k], p.str());
    if (!(t > 0)) bad(p.str(), "must be positive");
    if (k > 0 && !(t < cfg.scales.back())) bad(p.str(), "scales must be strictly decreasing");
    cfg.scales.push_back(t);
  }

  if (j.contains("K")) {
    if (!j["K"].is_number_integer() || j["K"].get<int>() < 1) bad("K", "expected an integer >= 1");
    cfg.K = j["K"].get<int>();
  }
  if (j.contains("samples")) {
    if (!j["samples"].is_number_integer() || j["samples"].get<int>() < 1)
      bad("samples", "expected an integer >= 1");
    cfg.samples = j["samples"].get<int>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
      bad("seed", "expected an integer");
    cfg.seed = j["seed"].get<uint64_t>();
  }
  if (j.contains("square_screen")) {
    if (!j["square_screen"].is_boolean()) bad("square_screen", "expected a boolean");
    cfg.square_screen = j["square_screen"].get<bool>();
  }
  if (j.contains("out_dir")) {
    if (!j["out_dir"].is_string()) bad("out_dir", "expected a string");
    cfg.out_dir = j["out_dir"].get<std::string>();
  }

  cfg.make_maps();      // validates contractivity and invertibility
  cfg.make_weights();   // validates normalization
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  j["maps"] = json::array();
  for (const MapSpec& s : cfg.maps)
    j["maps"].push_back({{"matrix", {s.a, s.b, s.c, s.d}}, {"translation", {s.tx, s.ty}}});
  j["weights"] = cfg.weights;
  json zoom = json::object();
  if (cfg.zoom_point) {
    zoom["point"] = {cfg.zoom_point->x, cfg.zoom_point->y};
  } else {
    zoom["prefix"] = cfg.zoom_prefix ? cfg.zoom_prefix->letters : std::vector<int>{};
    zoom["tail"] = cfg.zoom_tail.letters;
  }
  j["zoom"] = zoom;
  j["scales"] = cfg.scales;
  j["K"] = cfg.K;
  j["samples"] = cfg.samples;
  j["seed"] = cfg.seed;
  j["square_screen"] = cfg.square_screen;
  j["out_dir"] = cfg.out_dir;
  return j.dump(2) + "\n";
}

ResolvedZoom resolve_zoom(const RunConfig& cfg, const IFSSystem& ifs) {
  ResolvedZoom out;
  if (cfg.zoom_prefix) {
    out.zp.prefix = *cfg.zoom_prefix;
    out.zp.tail = cfg.zoom_tail;
    return out;
  }
  auto samples = attractor_sample_words(ifs, 40, 20000, cfg.seed, 0x5ee6);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [word, p] : samples) {
    double d = (p - *cfg.zoom_point).norm();
    if (d < best) {
      best = d;
      out.zp.prefix = word;
    }
  }
  out.zp.tail = FiniteWord{1};
  out.snap_distance = best;
  out.snapped = true;
  return out;
}

}  // namespace tl
