#include "podvs/pipeline.hpp"

#include <chrono>
#include <cstdlib>
#include <exception>
#include <numeric>
#include <thread>

namespace podvs {

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  threads = std::clamp(threads, 1, std::max(1, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int i = t; i < n; i += threads) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

OrientationSet orientations_for(ChannelId c) {
  const int o = orientation_index(c);
  return o < 0 ? OrientationSet::all() : OrientationSet::only(o);
}

int threads_from_env() {
  const char* v = std::getenv("PODVS_THREADS");
  if (!v) return 1;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (end == v || *end != '\0' || n < 1) return 1;
  return static_cast<int>(std::min<long>(n, kChannelCount));
}

Pipeline::Pipeline(EngineConfig cfg, int threads)
    : cfg_(cfg),
      threads_(std::max(1, threads)),
      banks_(make_kernel_banks(cfg.kernel_size(), cfg.coef_fraction_bits)),
      temporal_(make_temporal_kernels(cfg.frame_period_ms())),
      history_(kTemporalTaps) {
  cfg_.validate();
}

void Pipeline::reset() {
  history_.clear();
  frames_ = 0;
}

FieldMap Pipeline::step(const FrameRGB& frame) { return step_detailed(frame).saliency; }

FrameDetail Pipeline::step_detailed(const FrameRGB& frame) {
  validate_frame(frame, cfg_);
  history_.push(frame);
  ++frames_;

  FrameDetail d;
  d.inputs = extract_all(history_, temporal_);
  const Dimensions target = frame.dims();
  const auto params = fusion_params(cfg_);

  parallel_for(kChannelCount, threads_, [&](int i) {
    const auto opt = grouping_options(cfg_, orientations_for(kAllChannels[i]));
    d.conspicuity[i] = conspicuity(channel_grouping(d.inputs[i], banks_, opt), target, params.local_max);
  });

  d.saliency = fuse(d.conspicuity, params);
  return d;
}

double SequenceResult::mean_ms() const {
  if (frame_ms.empty()) return 0.0;
  return std::accumulate(frame_ms.begin(), frame_ms.end(), 0.0) / static_cast<double>(frame_ms.size());
}

SequenceResult run_sequence(const std::vector<FrameRGB>& frames, const EngineConfig& cfg, int threads) {
  if (frames.empty()) throw Error("run_sequence needs at least one frame");
  for (const auto& f : frames)
    if (f.dims() != frames.front().dims()) throw DimensionError("frames differ in size");

  Pipeline p(cfg, threads);
  SequenceResult r;
  r.maps.reserve(frames.size());
  r.frame_ms.reserve(frames.size());
  for (const auto& f : frames) {
    const auto t0 = std::chrono::steady_clock::now();
    r.maps.push_back(p.step(f));
    const auto t1 = std::chrono::steady_clock::now();
    r.frame_ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return r;
}

}  // namespace podvs
