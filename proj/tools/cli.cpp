#include "cli.hpp"

#include "podvs/hw_model.hpp"
#include "podvs/io.hpp"
#include "podvs/metrics.hpp"
#include "podvs/pipeline.hpp"
#include "podvs/synth.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

namespace podvs {

namespace {

std::string fmt(double v, int digits = 4) {
  if (!std::isfinite(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

struct RunArgs {
  std::string mode;
  std::string config;
  std::string in;
  std::string out;
  bool reference = false;
  bool raw = false;
  bool no_pgm = false;
  int threads = 0;
};

EngineConfig resolve_config(const std::string& config_path, const std::string& mode) {
  EngineConfig cfg = config_path.empty() ? default_config() : load_config(config_path);
  if (!mode.empty()) cfg.mode = parse_mode(mode);
  cfg.validate();
  return cfg;
}

int cmd_run(const RunArgs& a, std::ostream& out) {
  if (a.mode.empty() && a.config.empty()) throw ConfigError("run: give --mode or --config");
  const EngineConfig cfg = resolve_config(a.config, a.mode);
  const int threads = a.threads > 0 ? a.threads : threads_from_env();
  const auto frames = read_frames(a.in);
  for (const auto& f : frames) validate_frame(f, cfg);

  const bool hw = is_hw_resolution(cfg.mode) && !a.reference;
  ArchiveMeta meta;
  meta.frame_rate_hz = cfg.frame_rate_hz;
  meta.mode = std::string(mode_name(cfg.mode)) + (hw ? "" : is_hw_resolution(cfg.mode) ? "-reference" : "");
  const MapFormats formats{!a.no_pgm, a.raw};

  if (hw) {
    const auto r = run_hw_pipeline(frames, cfg, threads);
    write_maps(r.maps, a.out, meta, formats);
    write_file(fs::path(a.out) / "profile.txt", profile_text(r.profile));
    write_file(fs::path(a.out) / "profile.json", profile_json(r.profile) + "\n");
    out << "wrote " << r.maps.size() << " maps and the hardware profile to " << a.out << '\n';
    out << "modelled frame rate " << fmt(r.profile.frame_rate_hz(), 3) << " Hz, saturated values "
        << r.profile.saturation.values << ", accumulator overflows " << r.profile.saturation.accumulator << '\n';
  } else {
    const auto r = run_sequence(frames, cfg, threads);
    write_maps(r.maps, a.out, meta, formats);
    out << "wrote " << r.maps.size() << " maps to " << a.out << ", mean " << fmt(r.mean_ms(), 1) << " ms/frame\n";
  }
  write_file(fs::path(a.out) / "config.txt", serialize_config(cfg));
  return 0;
}

struct EvalArgs {
  std::vector<std::string> maps;
  std::string fixations;
  std::string pool;
  int repeats = 100;
  int bins = 20;
  std::uint64_t seed = 1;
};

std::vector<FixationRecord> load_fixations(const std::string& path) {
  const auto text = read_file(path);
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw Error("no fixations in " + path);
  return parse_fixations_csv(text);
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const FixationSet fix(load_fixations(a.fixations));
  if (fix.empty()) throw Error("no fixations in " + a.fixations);
  const FixationSet pool = a.pool.empty() ? fix : FixationSet(load_fixations(a.pool));

  VideoMaps maps;
  for (const auto& dir : a.maps) {
    fs::path p(dir);
    const std::string name = (p.has_filename() ? p : p.parent_path()).filename().string();
    maps[name] = read_archive(p).maps;
  }

  MetricConfig mc;
  mc.repeats = a.repeats;
  mc.kld_bins = a.bins;
  mc.seed = a.seed;
  const auto auc = shuffled_auc(maps, fix, pool, mc);
  const auto kld = shuffled_kld(maps, fix, pool, mc);
  for (const auto& [video, v] : auc.per_video)
    out << "video " << video << " auc " << fmt(v) << " kld " << fmt(kld.per_video.at(video)) << '\n';
  out << "shuffled_auc " << fmt(auc.value) << '\n';
  out << "shuffled_kld " << fmt(kld.value) << '\n';
  out << "videos " << auc.coverage.videos << " frames_scored " << auc.coverage.frames_scored << " frames_skipped "
      << auc.coverage.frames_skipped << " repeats " << mc.repeats << " seed " << mc.seed << '\n';
  return 0;
}

int cmd_compare(const std::string& a_dir, const std::string& b_dir, double threshold, std::ostream& out) {
  const auto a = read_archive(a_dir);
  const auto b = read_archive(b_dir);
  if (a.maps.size() != b.maps.size())
    throw DimensionError("archives hold " + std::to_string(a.maps.size()) + " and " + std::to_string(b.maps.size()) +
                         " frames");
  double pcc_sum = 0.0, nss_sum = 0.0;
  int pcc_n = 0, nss_n = 0;
  for (std::size_t i = 0; i < a.maps.size(); ++i) {
    double p = NAN, n = NAN;
    try {
      p = pcc(a.maps[i], b.maps[i]);
      pcc_sum += p;
      ++pcc_n;
    } catch (const DimensionError&) {
      throw;
    } catch (const Error&) {
    }
    try {
      n = nss(a.maps[i], b.maps[i], threshold);
      nss_sum += n;
      ++nss_n;
    } catch (const DimensionError&) {
      throw;
    } catch (const Error&) {
    }
    out << "frame " << i << " pcc " << fmt(p) << '\n';
    out << "frame " << i << " nss " << fmt(n) << '\n';
  }
  out << "mean pcc " << fmt(pcc_n ? pcc_sum / pcc_n : NAN) << " over " << pcc_n << " frames\n";
  out << "mean nss " << fmt(nss_n ? nss_sum / nss_n : NAN) << " over " << nss_n << " frames\n";
  return 0;
}

int cmd_profile(const std::string& mode, double parallel, bool json, const std::string& out_dir, std::ostream& out) {
  const auto m = parse_mode(mode);
  if (!is_hw_resolution(m)) throw ConfigError("profile: --mode must be hw112 or hw80");
  const auto p = cycle_model(m, parallel > 0 ? parallel : default_parallel_channels(m));
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "profile.txt", profile_text(p));
    write_file(fs::path(out_dir) / "profile.json", profile_json(p) + "\n");
  }
  out << (json ? profile_json(p) + "\n" : profile_text(p));
  return 0;
}

int cmd_synth(const std::string& out_dir, const std::string& mode, const std::string& name, std::ostream& out) {
  const Dimensions d = resolution_of(parse_mode(mode));
  std::vector<SynthVideo> videos;
  if (name.empty()) videos = synth_suite(d);
  else videos.push_back(synth_by_name(name, d));

  std::vector<FixationRecord> fixations;
  for (const auto& v : videos) {
    const fs::path dir = fs::path(out_dir) / v.name;
    fs::create_directories(dir);
    for (std::size_t i = 0; i < v.frames.size(); ++i) {
      char stem[16];
      std::snprintf(stem, sizeof stem, "%06zu.ppm", i);
      write_ppm(dir / stem, v.frames[i]);
    }
    std::ostringstream t;
    t << "target " << v.target.x << ' ' << v.target.y << ' ' << v.target.w << ' ' << v.target.h << '\n'
      << "onset " << v.onset << '\n';
    if (v.distractor)
      t << "distractor " << v.distractor->x << ' ' << v.distractor->y << ' ' << v.distractor->w << ' '
        << v.distractor->h << '\n';
    write_file(dir / "truth.txt", t.str());
    const auto f = synth_fixations(v);
    fixations.insert(fixations.end(), f.begin(), f.end());
    out << v.name << ": " << v.frames.size() << " frames\n";
  }
  write_file(fs::path(out_dir) / "fixations.csv", format_fixations_csv(fixations));
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Proto-object dynamic visual saliency engine"};
  app.set_version_flag("--version", std::string(kEngineVersion));
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "compute saliency maps for a frame sequence");
  run_cmd->add_option("--mode", run.mode, "reference | hw112 | hw80");
  run_cmd->add_option("--config", run.config, "key = value configuration file")->check(CLI::ExistingFile);
  run_cmd->add_option("--in", run.in, "frame directory or list file")->required();
  run_cmd->add_option("--out", run.out, "output directory")->required();
  run_cmd->add_flag("--reference", run.reference, "floating-point pipeline even in a hardware mode");
  run_cmd->add_flag("--raw", run.raw, "also write float32 .psal planes");
  run_cmd->add_flag("--no-pgm", run.no_pgm, "skip the 16-bit PGM maps");
  run_cmd->add_option("--threads", run.threads, "worker threads (default: PODVS_THREADS or 1)")
      ->check(CLI::Range(1, kChannelCount));

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "shuffled AUC and KLD of map archives against fixations");
  eval_cmd->add_option("maps", ev.maps, "map archive directories, one per video (named after the directory)")
      ->required();
  eval_cmd->add_option("--fixations", ev.fixations, "fixation CSV")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--pool", ev.pool, "CSV for shuffled negatives (default: --fixations)")
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--repeats", ev.repeats)->check(CLI::PositiveNumber);
  eval_cmd->add_option("--bins", ev.bins, "KLD histogram bins")->check(CLI::Range(2, 10000));
  eval_cmd->add_option("--seed", ev.seed);

  std::string cmp_a, cmp_b;
  double threshold = 0.7;
  auto* cmp_cmd = app.add_subcommand("compare", "PCC and NSS between two map archives");
  cmp_cmd->add_option("reference", cmp_a, "archive whose maps define the NSS mask")->required();
  cmp_cmd->add_option("test", cmp_b)->required();
  cmp_cmd->add_option("--threshold", threshold, "NSS mask threshold")->check(CLI::Range(0.0, 1.0));

  std::string prof_mode, prof_out;
  double parallel = 0.0;
  bool as_json = false;
  auto* prof_cmd = app.add_subcommand("profile", "cycle and block RAM ledger of the hardware model");
  prof_cmd->add_option("--mode", prof_mode, "hw112 | hw80")->required();
  prof_cmd->add_option("--parallel", parallel, "channels processed side by side")->check(CLI::Range(0.0, 9.0));
  prof_cmd->add_flag("--json", as_json, "print JSON instead of text");
  prof_cmd->add_option("--out", prof_out, "also write profile.txt and profile.json here");

  std::string synth_out, synth_mode = "hw112", synth_name;
  auto* synth_cmd = app.add_subcommand("synth", "write the built-in synthetic clips as PPM frames");
  synth_cmd->add_option("--out", synth_out)->required();
  synth_cmd->add_option("--mode", synth_mode, "resolution of the clips");
  synth_cmd->add_option("--name", synth_name, "one clip instead of the whole suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run_cmd) return cmd_run(run, out);
    if (*eval_cmd) return cmd_eval(ev, out);
    if (*cmp_cmd) return cmd_compare(cmp_a, cmp_b, threshold, out);
    if (*prof_cmd) return cmd_profile(prof_mode, parallel, as_json, prof_out, out);
    if (*synth_cmd) return cmd_synth(synth_out, synth_mode, synth_name, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace podvs
