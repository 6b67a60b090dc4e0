#include "podvs/hw_model.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace podvs {

std::string_view stage_name(HwStage s) {
  switch (s) {
    case HwStage::P1: return "P1 ingest";
    case HwStage::P2: return "P2 pyramid";
    case HwStage::P3: return "P3 edges+center-surround";
    case HwStage::P4: return "P4 von Mises filtering";
    case HwStage::P5: return "P5 von Mises sum";
    case HwStage::P6: return "P6 border ownership";
    case HwStage::P7: return "P7 grouping";
  }
  return "";
}

long long HwProfile::total_cycles() const {
  return std::accumulate(stages.begin(), stages.end(), 0LL, [](long long a, const StageEntry& s) { return a + s.cycles; });
}

long long HwProfile::critical_stage_cycles() const {
  long long m = 0;
  for (const auto& s : stages) m = std::max(m, s.cycles);
  return m;
}

long long HwProfile::bram_bits() const {
  return std::accumulate(stages.begin(), stages.end(), 0LL,
                         [](long long a, const StageEntry& s) { return a + s.bram_bits; });
}

double HwProfile::passes() const { return kChannelCount / parallel_channels; }

double HwProfile::frame_interval_cycles() const {
  return passes() * static_cast<double>(critical_stage_cycles() + host_allowance_cycles);
}

double HwProfile::frame_rate_hz() const { return clock_hz / frame_interval_cycles(); }

double default_parallel_channels(ResolutionMode m) {
  switch (m) {
    case ResolutionMode::Hw112: return 1.0;
    case ResolutionMode::Hw80: return 2.0;
    case ResolutionMode::Reference640: break;
  }
  throw ConfigError("mode: the hardware model needs hw112 or hw80");
}

namespace {

struct LevelPixels {
  std::vector<long long> n;
  [[nodiscard]] long long total() const { return std::accumulate(n.begin(), n.end(), 0LL); }
};

LevelPixels level_pixels(ResolutionMode m) {
  if (!is_hw_resolution(m)) throw ConfigError("mode: the hardware model needs hw112 or hw80");
  LevelPixels p;
  for (const auto& d : hw_level_dims(resolution_of(m))) p.n.push_back(d.pixels());
  return p;
}

std::array<long long, kHwStageCount> stage_bits(const LevelPixels& px, int word) {
  const long long n0 = px.n[0];
  const long long nt = px.total();
  return {
      n0 * word,                // P1: one channel frame
      (nt - n0) * word,         // P2: the two reduced levels
      6 * nt * word,            // P3: 4 edge + ON + OFF per pixel, all levels
      16 * nt * word,           // P4: 16 von Mises responses
      0,                        // P5 overwrites P4's buffers
      8 * nt * word,            // P6: light/dark x left/right
      4 * nt * word,            // P7: grouping per orientation
  };
}

}  // namespace

HwProfile cycle_model(ResolutionMode m, double parallel_channels, const HwTiming& t) {
  if (!(parallel_channels > 0.0)) throw ConfigError("parallel channels must be positive");
  const LevelPixels px = level_pixels(m);
  const long long nt = px.total();
  const int levels = static_cast<int>(px.n.size());

  long long p5_terms = 0;
  for (int l = 0; l < levels; ++l) p5_terms += px.n[l] * (levels - l);

  HwProfile p;
  p.mode = m;
  p.parallel_channels = parallel_channels;
  p.clock_hz = t.clock_hz;
  p.host_allowance_cycles = t.host_allowance_cycles;

  const auto bits = stage_bits(px, t.word_bits);
  const long long fsm = static_cast<long long>(t.fsm_cycles_per_pixel()) * nt;
  const std::array<long long, kHwStageCount> cycles{
      t.ingest_cycles_per_pixel * px.n[0],
      t.pyramid_cycles_per_pixel * px.n[1],
      fsm,
      fsm,
      t.sum_cycles_per_term * p5_terms,
      t.modulate_cycles_per_pixel * px.n[0],
      fsm,
  };
  const std::array<const char*, kHwStageCount> notes{
      "host-side 8-bit encoding, one word per cycle",
      "nearest neighbour, shift-approximated addresses",
      "9 weighted sums in parallel per pixel",
      "16 weighted sums in parallel per pixel",
      "in place, no extra block RAM",
      "finest-level pass",
      "masks from host (0 CC), inhibition then 2 weighted sums",
  };
  for (int s = 0; s < kHwStageCount; ++s)
    p.stages[s] = {static_cast<HwStage>(s), cycles[s], bits[s], notes[s]};
  return p;
}

HwProfile cycle_model(ResolutionMode m) { return cycle_model(m, default_parallel_channels(m)); }

double ResourceReport::total_bits() const { return std::accumulate(bits.begin(), bits.end(), 0.0); }

ResourceReport resource_report(ResolutionMode m, double channels, const HwTiming& t) {
  if (channels < 0.0) throw ConfigError("channel count must be non-negative");
  ResourceReport r;
  r.mode = m;
  r.channels = channels;
  r.per_channel_bits = stage_bits(level_pixels(m), t.word_bits);
  for (int s = 0; s < kHwStageCount; ++s) r.bits[s] = channels * static_cast<double>(r.per_channel_bits[s]);
  return r;
}

std::string profile_text(const HwProfile& p) {
  std::ostringstream os;
  char line[160];
  os << "mode " << mode_name(p.mode) << " (" << resolution_token(p.mode) << "), " << p.parallel_channels
     << " channel(s) in parallel\n";
  std::snprintf(line, sizeof line, "%-28s %12s %12s %10s\n", "stage", "cycles", "bram_bits", "bram_KB");
  os << line;
  for (const auto& s : p.stages) {
    std::snprintf(line, sizeof line, "%-28s %12lld %12lld %10.2f\n", std::string(stage_name(s.stage)).c_str(),
                  s.cycles, s.bram_bits, s.bram_bits / 8000.0);
    os << line;
  }
  std::snprintf(line, sizeof line, "%-28s %12lld %12lld %10.2f\n", "total", p.total_cycles(), p.bram_bits(),
                p.bram_bits() / 8000.0);
  os << line;
  std::snprintf(line, sizeof line, "host allowance per pass      %12lld\n", p.host_allowance_cycles);
  os << line;
  std::snprintf(line, sizeof line, "frame interval               %14.1f cycles (%.2f passes)\n",
                p.frame_interval_cycles(), p.passes());
  os << line;
  std::snprintf(line, sizeof line, "frame rate                   %10.3f Hz at %.0f MHz\n", p.frame_rate_hz(),
                p.clock_hz / 1e6);
  os << line;
  if (p.frames > 0)
    os << "frames " << p.frames << ", saturated values " << p.saturation.values << ", accumulator overflows "
       << p.saturation.accumulator << '\n';
  return os.str();
}

std::string profile_json(const HwProfile& p) {
  nlohmann::json j;
  j["mode"] = std::string(mode_name(p.mode));
  j["resolution"] = std::string(resolution_token(p.mode));
  j["parallel_channels"] = p.parallel_channels;
  j["clock_hz"] = p.clock_hz;
  j["host_allowance_cycles"] = p.host_allowance_cycles;
  auto& stages = j["stages"] = nlohmann::json::array();
  for (const auto& s : p.stages)
    stages.push_back({{"name", std::string(stage_name(s.stage))},
                      {"cycles", s.cycles},
                      {"bram_bits", s.bram_bits},
                      {"note", s.note}});
  j["total_cycles"] = p.total_cycles();
  j["bram_bits"] = p.bram_bits();
  j["frame_interval_cycles"] = p.frame_interval_cycles();
  j["frame_rate_hz"] = p.frame_rate_hz();
  j["frames"] = p.frames;
  j["saturation"] = {{"values", p.saturation.values}, {"accumulator", p.saturation.accumulator}};
  return j.dump(2);
}

namespace {

// B products are scaled by 2^-9 on the way back into the data format.
constexpr int kModulationShift = 9;

struct HwLevel {
  std::array<RawMap, kOrientations> edge;
  RawMap on, off;
  std::array<RawMap, kOrientations> on_left, on_right, off_left, off_right;
};

struct RawBanks {
  std::array<RawMap, kOrientations> even, odd, left, right, left_conv, right_conv;
  RawMap cs;
};

RawBanks raw_banks(const KernelBanks& b) {
  RawBanks r;
  const int f = b.coef_fraction_bits;
  for (int o = 0; o < kOrientations; ++o) {
    r.even[o] = raw_coefficients(b.edge.even[o], f);
    r.odd[o] = raw_coefficients(b.edge.odd[o], f);
    r.left[o] = raw_coefficients(b.vm.left[o], f);
    r.right[o] = raw_coefficients(b.vm.right[o], f);
    // Convolution is correlation with the kernel rotated by 180 degrees.
    r.left_conv[o] = rotate180(r.left[o]);
    r.right_conv[o] = rotate180(r.right[o]);
  }
  r.cs = raw_coefficients(b.cs.on, f);
  return r;
}

// P1: the host scales each channel into an 8-bit word before transfer.
RawMap ingest(const FieldMap& input, bool signed_input, const FixedFormat& data, SaturationCount* sat) {
  const FixedFormat word = signed_input ? kSignedPixelFormat : kPixelFormat;
  const double peak = signed_input ? input.abs().maxCoeff() : input.maxCoeff();
  if (!(peak > 0.0)) return RawMap::Zero(input.rows(), input.cols());
  const double gain = static_cast<double>(word.max_raw()) / peak;
  RawMap w = quantize(input * gain, word, sat);
  return w * (std::int64_t{1} << data.fraction_bits);
}

}  // namespace

ImagePyramid hw_channel_grouping(const FieldMap& input, bool signed_input, const KernelBanks& banks,
                                 const EngineConfig& cfg, OrientationSet orientations, SaturationCount* sat) {
  if (!is_hw_resolution(cfg.mode)) throw ConfigError("mode: the hardware model needs hw112 or hw80");
  if (dims_of(input) != cfg.resolution())
    throw DimensionError("hardware input must be " + to_string(cfg.resolution()) + ", got " + to_string(dims_of(input)));

  const FixedFormat data{cfg.fixed_total_bits, cfg.fixed_fraction_bits, true};
  const int cf = banks.coef_fraction_bits;
  const int acc = cfg.accumulator_bits;
  const RawBanks rb = raw_banks(banks);

  // P1, P2
  const Pyramid<std::int64_t> pyr = build_hw_pyramid(ingest(input, signed_input, data, sat));
  const int depth = pyr.depth();

  // P3, P4
  std::vector<HwLevel> lv(depth);
  for (int l = 0; l < depth; ++l) {
    const RawMap& x = pyr.levels[l];
    const RawMap r = fixed_correlate(x, data, rb.cs, cf, data, acc, sat, cfg.border);
    lv[l].on = r.max(0);
    lv[l].off = (-r).max(0);
    for (int o = 0; o < kOrientations; ++o) {
      if (!orientations.use[o]) continue;
      const RawMap e = fixed_correlate(x, data, rb.even[o], cf, data, acc, sat, cfg.border);
      const RawMap d = fixed_correlate(x, data, rb.odd[o], cf, data, acc, sat, cfg.border);
      RawMap mag(e.rows(), e.cols());
      for (Eigen::Index i = 0; i < e.size(); ++i)
        mag.data()[i] = saturate(isqrt_round(e.data()[i] * e.data()[i] + d.data()[i] * d.data()[i]), data, sat);
      lv[l].edge[o] = std::move(mag);
      lv[l].on_left[o] = fixed_correlate(lv[l].on, data, rb.left[o], cf, data, acc, sat, cfg.border);
      lv[l].on_right[o] = fixed_correlate(lv[l].on, data, rb.right[o], cf, data, acc, sat, cfg.border);
      lv[l].off_left[o] = fixed_correlate(lv[l].off, data, rb.left[o], cf, data, acc, sat, cfg.border);
      lv[l].off_right[o] = fixed_correlate(lv[l].off, data, rb.right[o], cf, data, acc, sat, cfg.border);
    }
  }

  // P5: coarser levels are added into finer ones with shift weights, in place
  // from the finest level up so every read sees an unmodified coarser level.
  auto sum_across = [&](auto member, int o) {
    for (int l = 0; l < depth; ++l) {
      RawMap& dst = (lv[l].*member)[o];
      for (int k = l + 1; k < depth; ++k) {
        const RawMap& src = (lv[k].*member)[o];
        const RawMap up = resample_nearest(src, make_index_map(dims_of(src), dims_of(dst), AddressMode::Shift));
        dst += up.unaryExpr([s = k - l](std::int64_t v) { return v >> s; });
      }
      dst = dst.unaryExpr([&](std::int64_t v) { return saturate(v, data, sat); });
    }
  };
  for (int o = 0; o < kOrientations; ++o) {
    if (!orientations.use[o]) continue;
    sum_across(&HwLevel::on_left, o);
    sum_across(&HwLevel::on_right, o);
    sum_across(&HwLevel::off_left, o);
    sum_across(&HwLevel::off_right, o);
  }

  const int mod_shift = data.fraction_bits + kModulationShift;
  const std::int64_t wp_raw = std::llround(std::ldexp(cfg.inhibition_weight, cf));
  auto modulate = [&](const RawMap& e, const RawMap& v) {
    RawMap out(e.rows(), e.cols());
    for (Eigen::Index i = 0; i < e.size(); ++i)
      out.data()[i] = saturate(std::max<std::int64_t>(0, round_shift(e.data()[i] * v.data()[i], mod_shift)), data, sat);
    return out;
  };
  auto add_sat = [&](const RawMap& a, const RawMap& b) {
    return RawMap((a + b).unaryExpr([&](std::int64_t v) { return saturate(v, data, sat); }));
  };
  // M . (B_own - w_p B_other), masked by the host-side decision.
  auto compete = [&](const Mask& m, const RawMap& own, const RawMap& other) {
    RawMap out(own.rows(), own.cols());
    for (Eigen::Index i = 0; i < own.size(); ++i) {
      if (!m.data()[i]) {
        out.data()[i] = 0;
        continue;
      }
      const std::int64_t inhib = round_shift(wp_raw * other.data()[i], cf);
      out.data()[i] = saturate(own.data()[i] - inhib, data, sat);
    }
    return out;
  };

  const double back_to_real = std::ldexp(1.0, kModulationShift);
  ImagePyramid out;
  out.levels.reserve(depth);
  for (int l = 0; l < depth; ++l) {
    FieldMap total = FieldMap::Zero(pyr.levels[l].rows(), pyr.levels[l].cols());
    for (int o = 0; o < kOrientations; ++o) {
      if (!orientations.use[o]) continue;
      // P6
      const RawMap bl = add_sat(modulate(lv[l].edge[o], lv[l].on_left[o]), modulate(lv[l].edge[o], lv[l].off_left[o]));
      const RawMap br =
          add_sat(modulate(lv[l].edge[o], lv[l].on_right[o]), modulate(lv[l].edge[o], lv[l].off_right[o]));
      // Host: side masks, ties to the left.
      const Mask ml = (bl >= br).cast<std::uint8_t>();
      const Mask mr = (bl < br).cast<std::uint8_t>();
      // P7
      const RawMap gl = fixed_correlate(compete(ml, bl, br), data, rb.left_conv[o], cf, data, acc, sat, cfg.border);
      const RawMap gr = fixed_correlate(compete(mr, br, bl), data, rb.right_conv[o], cf, data, acc, sat, cfg.border);
      total += dequantize(add_sat(gl, gr), data);
    }
    out.levels.push_back(total.max(0.0) * back_to_real);
  }
  return out;
}

HwPipeline::HwPipeline(EngineConfig cfg, int threads, double parallel_channels)
    : cfg_(cfg),
      threads_(std::max(1, threads)),
      banks_(make_kernel_banks(cfg.kernel_size(), cfg.coef_fraction_bits)),
      temporal_(make_temporal_kernels(cfg.frame_period_ms())),
      history_(kTemporalTaps) {
  cfg_.validate();
  if (!is_hw_resolution(cfg_.mode)) throw ConfigError("mode: the hardware model needs hw112 or hw80");
  profile_ = cycle_model(cfg_.mode, parallel_channels > 0 ? parallel_channels : default_parallel_channels(cfg_.mode));
}

FieldMap HwPipeline::step(const FrameRGB& frame) { return step_detailed(frame).saliency; }

FrameDetail HwPipeline::step_detailed(const FrameRGB& frame) {
  validate_frame(frame, cfg_);
  history_.push(frame);

  FrameDetail d;
  d.inputs = extract_all(history_, temporal_);
  const auto params = fusion_params(cfg_);
  std::array<SaturationCount, kChannelCount> sat{};

  parallel_for(kChannelCount, threads_, [&](int i) {
    const ChannelId c = kAllChannels[i];
    const auto grouping =
        hw_channel_grouping(d.inputs[i], is_signed_channel(c), banks_, cfg_, orientations_for(c), &sat[i]);
    d.conspicuity[i] = conspicuity(grouping, frame.dims(), params.local_max);
  });

  for (const auto& s : sat) profile_.saturation += s;
  ++profile_.frames;
  d.saliency = fuse(d.conspicuity, params);
  return d;
}

HwRun run_hw_pipeline(const std::vector<FrameRGB>& frames, const EngineConfig& cfg, int threads) {
  if (frames.empty()) throw Error("run_hw_pipeline needs at least one frame");
  HwPipeline p(cfg, threads);
  HwRun r;
  r.maps.reserve(frames.size());
  for (const auto& f : frames) r.maps.push_back(p.step(f));
  r.profile = p.profile();
  return r;
}

}  // namespace podvs
