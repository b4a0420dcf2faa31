// tangent-lens: zoom renderer and analyzer for planar self-affine sets.
// Talks to the core exclusively through the C API.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tangent_lens.h"

namespace {

struct Options {
  std::string config;
  std::string out_dir;
  std::string seed;
  int k = 0;
  int samples = 0;
  int threads = 1;
  bool square_screen = false;
};

int exit_code(tl_status st) {
  if (st == TL_OK) return 0;
  if (st == TL_ERR_CHECK_FAILED) return 2;
  return 1;
}

void report_error(tl_session* s, const char* what, tl_status st) {
  std::cerr << "tangent-lens: " << what << ": " << tl_last_error(s) << " (status " << st << ")\n";
}

tl_session* open_session(const Options& opt) {
  tl_session* s = nullptr;
  tl_status st = tl_open_file(opt.config.c_str(), &s);
  if (st != TL_OK) {
    report_error(nullptr, "config", st);
    return nullptr;
  }
  auto apply = [&](const char* key, const std::string& value) {
    if (value.empty()) return true;
    tl_status ost = tl_override(s, key, value.c_str());
    if (ost != TL_OK) report_error(s, key, ost);
    return ost == TL_OK;
  };
  bool ok = apply("seed", opt.seed) && apply("out", opt.out_dir) &&
            apply("k", opt.k > 0 ? std::to_string(opt.k) : "") &&
            apply("samples", opt.samples > 0 ? std::to_string(opt.samples) : "") &&
            apply("square_screen", opt.square_screen ? "1" : "");
  if (!ok) {
    tl_close(s);
    return nullptr;
  }
  return s;
}

std::string take(char* str) {
  std::string out = str ? str : "";
  tl_free(str);
  return out;
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "tangent-lens: cannot write " << path << "\n";
    return false;
  }
  out << text;
  return true;
}

std::string resolved_out_dir(tl_session* s, const Options& opt) {
  if (!opt.out_dir.empty()) return opt.out_dir;
  char* cfg = nullptr;
  if (tl_config_json(s, &cfg) != TL_OK) return "out";
  std::string text = take(cfg);
  auto pos = text.find("\"out_dir\": \"");
  if (pos == std::string::npos) return "out";
  pos += 12;
  return text.substr(pos, text.find('"', pos) - pos);
}

int run_analyze(const Options& opt) {
  tl_session* s = open_session(opt);
  if (!s) return 1;

  std::string out_dir = resolved_out_dir(s, opt);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);

  char* info = nullptr;
  tl_status st = tl_system_info(s, &info);
  if (st != TL_OK) {
    report_error(s, "system info", st);
    tl_close(s);
    return exit_code(st);
  }
  std::string info_json = take(info);

  char* checks = nullptr;
  tl_status check_st = tl_check(s, &checks);
  if (check_st != TL_OK && check_st != TL_ERR_CHECK_FAILED) {
    report_error(s, "checks", check_st);
    tl_close(s);
    return exit_code(check_st);
  }
  std::string checks_json = take(checks);

  char* lyap = nullptr;
  st = tl_lyapunov(s, 0, 0, opt.threads, &lyap);
  if (st != TL_OK) {
    report_error(s, "lyapunov", st);
    tl_close(s);
    return exit_code(st);
  }
  std::string lyap_json = take(lyap);

  char* tangent = nullptr;
  st = tl_tangent(s, &tangent);
  if (st != TL_OK) {
    report_error(s, "tangent", st);
    tl_close(s);
    return exit_code(st);
  }
  std::string tangent_json = take(tangent);

  auto strip = [](std::string t) {
    while (!t.empty() && (t.back() == '\n' || t.back() == ' ')) t.pop_back();
    return t;
  };
  std::string report = "{\n\"system\": " + strip(info_json) + ",\n\"checks\": " +
                       strip(checks_json) + ",\n\"lyapunov\": " + strip(lyap_json) +
                       ",\n\"tangent\": " + strip(tangent_json) + "\n}\n";
  if (!write_file(out_dir + "/report.json", report)) {
    tl_close(s);
    return 1;
  }

  std::cout << "report: " << out_dir << "/report.json\n";
  std::cout << (check_st == TL_OK ? "checks: all pass\n" : "checks: FAILED\n");
  tl_close(s);
  return exit_code(check_st);
}

int run_zoom(const Options& opt) {
  tl_session* s = open_session(opt);
  if (!s) return 1;

  std::string out_dir = resolved_out_dir(s, opt);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);

  char* tangent = nullptr;
  tl_status st = tl_tangent(s, &tangent);
  if (st != TL_OK) {
    report_error(s, "tangent", st);
    tl_close(s);
    return exit_code(st);
  }
  std::string report = "{\n\"tangent\": " + take(tangent);
  // take() keeps the trailing newline; close the wrapper object
  while (!report.empty() && report.back() == '\n') report.pop_back();
  report += "\n}\n";
  if (!write_file(out_dir + "/report.json", report)) {
    tl_close(s);
    return 1;
  }

  char* csv = nullptr;
  st = tl_zoom(s, opt.threads, &csv);
  if (st != TL_OK) {
    report_error(s, "zoom", st);
    tl_close(s);
    return exit_code(st);
  }
  tl_free(csv);

  std::cout << "frames and trace written to " << out_dir << "\n";
  tl_close(s);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"local structure of planar self-affine sets"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", opt.config, "JSON configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", opt.seed, "override RNG seed");
    cmd->add_option("--out", opt.out_dir, "output directory");
    cmd->add_option("--k", opt.k, "approximation depth K");
    cmd->add_option("--samples", opt.samples, "scenery sample count");
    cmd->add_option("--threads", opt.threads, "worker threads for estimates");
    cmd->add_flag("--square-screen", opt.square_screen, "render the full square window");
  };

  CLI::App* zoom = app.add_subcommand("zoom", "render zoom frames and the scale trace");
  CLI::App* analyze = app.add_subcommand("analyze", "run condition checks and classification");
  add_common(zoom);
  add_common(analyze);

  CLI11_PARSE(app, argc, argv);

  try {
    if (zoom->parsed()) return run_zoom(opt);
    return run_analyze(opt);
  } catch (const std::exception& e) {
    std::cerr << "tangent-lens: " << e.what() << "\n";
    return 1;
  }
}
