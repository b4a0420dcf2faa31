#include "tangent_lens.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "conditions.hpp"
#include "config.hpp"
#include "render.hpp"
#include "spectral.hpp"
#include "tangents.hpp"

using nlohmann::json;

struct tl_session {
  tl::RunConfig cfg;
  std::optional<tl::IFSSystem> ifs;
  tl::ResolvedZoom zoom;
  std::string last_error;
};

namespace {

thread_local std::string g_open_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

tl_status fail(tl_session* s, tl_status code, const std::string& msg) {
  if (s)
    s->last_error = msg;
  else
    g_open_error = msg;
  return code;
}

// Wrap a body that may throw; config errors map to TL_ERR_CONFIG.
template <typename Fn>
tl_status guarded(tl_session* s, Fn&& fn) {
  try {
    return fn();
  } catch (const tl::ConfigError& e) {
    return fail(s, TL_ERR_CONFIG, e.what());
  } catch (const std::exception& e) {
    return fail(s, TL_ERR_RUNTIME, e.what());
  }
}

tl_status open_common(const std::string& text, bool is_path, tl_session** out) {
  *out = nullptr;
  auto s = std::make_unique<tl_session>();
  try {
    s->cfg = is_path ? tl::load_config(text) : tl::parse_config(text);
    s->ifs.emplace(s->cfg.make_system());
    s->zoom = tl::resolve_zoom(s->cfg, *s->ifs);
  } catch (const tl::ConfigError& e) {
    return fail(nullptr, TL_ERR_CONFIG, e.what());
  } catch (const std::exception& e) {
    return fail(nullptr, TL_ERR_CONFIG, e.what());
  }
  *out = s.release();
  return TL_OK;
}

json word_json(const tl::FiniteWord& w) { return json(w.letters); }

json report_json(const tl::ConditionReport& rep) {
  json j;
  j["name"] = rep.name;
  j["verdict"] = tl::verdict_name(rep.verdict);
  j["witness"] = rep.witness;
  j["data"] = json::object();
  for (const auto& [key, value] : rep.data) j["data"][key] = value;
  return j;
}

bool system_is_diagonal(const tl::IFSSystem& ifs) {
  for (const tl::AffineMap2& f : ifs.maps())
    if (std::abs(f.matrix.b) > 1e-14 || std::abs(f.matrix.c) > 1e-14) return false;
  return true;
}

std::string format_csv(const std::vector<tl::ScaleTraceRow>& trace) {
  std::ostringstream os;
  os << "scale,level,ratio,pattern,d_hausdorff\n";
  char buf[96];
  for (const tl::ScaleTraceRow& row : trace) {
    std::snprintf(buf, sizeof(buf), "%.17g,%d,%.17g,%d,%.17g\n", row.scale, row.level, row.ratio,
                  row.pattern ? 1 : 0, row.d_hausdorff);
    os << buf;
  }
  return os.str();
}

json tangent_json(const tl::TangentReport& rep, const tl::ResolvedZoom& zoom) {
  json j;
  switch (rep.cls) {
    case tl::TangentClass::Fibered: j["class"] = "fibered"; break;
    case tl::TangentClass::Segment: j["class"] = "segment"; break;
    default: j["class"] = "undetermined"; break;
  }
  j["epsilon"] = rep.epsilon;
  j["note"] = rep.note;
  j["trace"] = json::array();
  for (const tl::ScaleTraceRow& row : rep.trace)
    j["trace"].push_back({{"scale", row.scale},
                          {"level", row.level},
                          {"ratio", row.ratio},
                          {"pattern", row.pattern},
                          {"d_hausdorff", row.d_hausdorff}});
  if (rep.cls == tl::TangentClass::Fibered) {
    j["deformation_bound"] = rep.deformation_bound;
    j["porosity"] = rep.porosity;
    j["fiber_set"] = json::array();
    for (const tl::Interval& iv : rep.fiber_set) j["fiber_set"].push_back({iv.lo, iv.hi});
  }
  if (rep.cls == tl::TangentClass::Segment) j["segment"] = {rep.segment.lo, rep.segment.hi};
  j["zoom"] = {{"prefix", word_json(zoom.zp.prefix)},
               {"tail", word_json(zoom.zp.tail)},
               {"snapped", zoom.snapped},
               {"snap_distance", zoom.snap_distance}};
  return j;
}

}  // namespace

extern "C" {

tl_status tl_open(const char* config_json, tl_session** out) {
  if (!config_json || !out) return TL_ERR_ARG;
  return open_common(config_json, false, out);
}

tl_status tl_open_file(const char* path, tl_session** out) {
  if (!path || !out) return TL_ERR_ARG;
  return open_common(path, true, out);
}

void tl_close(tl_session* s) { delete s; }

const char* tl_last_error(const tl_session* s) {
  return s ? s->last_error.c_str() : g_open_error.c_str();
}

tl_status tl_override(tl_session* s, const char* key, const char* value) {
  if (!s || !key || !value) return TL_ERR_ARG;
  return guarded(s, [&]() -> tl_status {
    std::string k = key, v = value;
    if (k == "seed") {
      s->cfg.seed = std::stoull(v);
      if (s->cfg.zoom_point) s->zoom = tl::resolve_zoom(s->cfg, *s->ifs);  // snap uses the seed
    } else if (k == "k") {
      int kk = std::stoi(v);
      if (kk < 1) return fail(s, TL_ERR_ARG, "k must be >= 1");
      s->cfg.K = kk;
    } else if (k == "samples") {
      int n = std::stoi(v);
      if (n < 1) return fail(s, TL_ERR_ARG, "samples must be >= 1");
      s->cfg.samples = n;
    } else if (k == "out") {
      s->cfg.out_dir = v;
    } else if (k == "square_screen") {
      s->cfg.square_screen = v == "1" || v == "true";
    } else {
      return fail(s, TL_ERR_ARG, "unknown override key: " + k);
    }
    return TL_OK;
  });
}

tl_status tl_config_json(tl_session* s, char** json_out) {
  if (!s || !json_out) return TL_ERR_ARG;
  return guarded(s, [&]() -> tl_status {
    *json_out = dup_string(tl::serialize_config(s->cfg));
    return TL_OK;
  });
}

tl_status tl_system_info(tl_session* s, char** json_out) {
  if (!s || !json_out) return TL_ERR_ARG;
  return guarded(s, [&]() -> tl_status {
    const tl::IFSSystem& ifs = *s->ifs;
    json j;
    j["name"] = s->cfg.name;
    j["m"] = ifs.m();
    j["alpha_lo"] = ifs.alpha_lo();
    j["alpha_hi"] = ifs.alpha_hi();
    j["bbox"] = {{"x", {ifs.bbox().x.lo, ifs.bbox().x.hi}},
                 {"y", {ifs.bbox().y.lo, ifs.bbox().y.hi}}};
    j["L"] = ifs.L_est();
    j["diagonal"] = system_is_diagonal(ifs);
    if (ifs.delta_lb())
      j["delta_lb"] = *ifs.delta_lb();
    else
      j["delta_lb"] = nullptr;
    const tl::SeparationReport& sep = ifs.separation();
    j["separation"] = sep.kind == tl::SeparationReport::Kind::Certified   ? "certified"
                      : sep.kind == tl::SeparationReport::Kind::Violated  ? "violated"
                                                                          : "undecided";
    j["zoom"] = {{"prefix", word_json(s->zoom.zp.prefix)},
                 {"tail", word_json(s->zoom.zp.tail)},
                 {"snapped", s->zoom.snapped},
                 {"snap_distance", s->zoom.snap_distance}};
    *json_out = dup_string(j.dump(2) + "\n");
    return TL_OK;
  });
}

tl_status tl_check(tl_session* s, char** json_out) {
  if (!s || !json_out) return TL_ERR_ARG;
  return guarded(s, [&]() -> tl_status {
    const tl::IFSSystem& ifs = *s->ifs;
    tl::BernoulliWeights weights = s->cfg.make_weights();
    bool diagonal = system_is_diagonal(ifs);

    json checks = json::array();
    bool any_fail = false;
    auto add = [&](const tl::ConditionReport& rep) {
      checks.push_back(report_json(rep));
      any_fail |= rep.verdict == tl::Verdict::Fail;
    };

    add(tl::check_projection_sufficient(ifs, diagonal ? 1 : 360));
    add(tl::check_pinching(ifs, 1000.0, 32));
    if (diagonal) {
      tl::CarpetReport carpet = tl::check_carpet(ifs, weights);
      add(carpet.separation);
      add(carpet.coverage);
      add(carpet.lyapunov);
    } else {
      add(tl::check_twisting(ifs, {1, 0}, {{1, 0}, {0, 1}}, 8));
    }

    json j;
    j["checks"] = checks;
    j["all_pass"] = !any_fail;
    *json_out = dup_string(j.dump(2) + "\n");
    if (any_fail) return fail(s, TL_ERR_CHECK_FAILED, "a condition check failed");
    return TL_OK;
  });
}

tl_status tl_lyapunov(tl_session* s, int n, int trials, int threads, char** json_out) {
  if (!s || !json_out) return TL_ERR_ARG;
  return guarded(s, [&]() -> tl_status {
    if (n <= 0) n = 5000;
    if (trials <= 0) trials = 64;
    if (threads <= 0) threads = 1;
    const tl::IFSSystem& ifs = *s->ifs;
    tl::BernoulliWeights weights = s->cfg.make_weights();
    tl::LyapunovEstimate est =
        tl::lyapunov_estimate(ifs, weights, n, trials, s->cfg.seed, 1, threads);
    json j;
    j["n"] = est.n;
    j["trials"] = est.trials;
    j["lambda1"] = est.lambda1;
    j["lambda2"] = est.lambda2;
    j["stderr1"] = est.stderr1;
    j["stderr2"] = est.stderr2;
    if (system_is_diagonal(ifs)) {
      auto [lh, lv] = tl::carpet_lyapunov(ifs, weights);
      j["closed_form"] = {{"lambda_h", lh}, {"lambda_v", lv}};
    }
    *json_out = dup_string(j.dump(2) + "\n");
    return TL_OK;
  });
}

tl_status tl_tangent(tl_session* s, char** json_out) {
  if (!s || !json_out) return TL_ERR_ARG;
  return guarded(s, [&]() -> tl_status {
    tl::TangentReport rep = tl::modified_tangent(*s->ifs, s->zoom.zp, s->cfg.scales, s->cfg.K,
                                                 s->cfg.samples, s->cfg.seed, 100);
    *json_out = dup_string(tangent_json(rep, s->zoom).dump(2) + "\n");
    return TL_OK;
  });
}

tl_status tl_zoom(tl_session* s, int threads, char** trace_csv_out) {
  if (!s || !trace_csv_out) return TL_ERR_ARG;
  (void)threads;  // rendering is deterministic regardless
  return guarded(s, [&]() -> tl_status {
    std::error_code ec;
    std::filesystem::create_directories(s->cfg.out_dir, ec);
    if (ec) return fail(s, TL_ERR_IO, "cannot create " + s->cfg.out_dir);

    tl::TangentReport rep = tl::modified_tangent(*s->ifs, s->zoom.zp, s->cfg.scales, s->cfg.K,
                                                 s->cfg.samples, s->cfg.seed, 100);
    for (double t : s->cfg.scales) {
      tl::Screen screen = tl::construction_level(*s->ifs, s->zoom.zp, t);
      tl::FrameImage img = tl::render_frame(*s->ifs, screen, s->cfg.square_screen);
      tl::write_ppm(s->cfg.out_dir + "/" + tl::frame_filename(t), img);
    }

    std::string csv = format_csv(rep.trace);
    std::ofstream out(s->cfg.out_dir + "/trace.csv", std::ios::binary);
    if (!out) return fail(s, TL_ERR_IO, "cannot write trace.csv");
    out << csv;
    out.close();
    *trace_csv_out = dup_string(csv);
    return TL_OK;
  });
}

void tl_free(char* str) { std::free(str); }

}  // extern "C"
