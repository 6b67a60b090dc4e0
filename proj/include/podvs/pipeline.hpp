#pragma once

#include "podvs/channels.hpp"
#include "podvs/grouping.hpp"
#include "podvs/normalization.hpp"

#include <functional>
#include <vector>

namespace podvs {

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Work is assigned
/// round-robin so each index always lands on the same worker.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

/// Orientation subset feeding a channel's grouping: O_theta channels use only
/// their own orientation, the others use all four.
OrientationSet orientations_for(ChannelId c);

/// Reads PODVS_THREADS; 1 when unset or invalid.
int threads_from_env();

struct FrameDetail {
  ChannelMaps inputs;       // channel inputs after temporal filtering
  ChannelMaps conspicuity;  // per-channel maps at the input resolution
  FieldMap saliency;
};

class Pipeline {
 public:
  explicit Pipeline(EngineConfig cfg, int threads = 1);

  /// Pushes the frame and returns the saliency map for it, in [0, 1].
  FieldMap step(const FrameRGB& frame);
  FrameDetail step_detailed(const FrameRGB& frame);

  void reset();

  [[nodiscard]] const EngineConfig& config() const { return cfg_; }
  [[nodiscard]] const KernelBanks& banks() const { return banks_; }
  [[nodiscard]] const TemporalKernels& temporal() const { return temporal_; }
  [[nodiscard]] int frames_processed() const { return frames_; }
  [[nodiscard]] int threads() const { return threads_; }

 private:
  EngineConfig cfg_;
  int threads_;
  KernelBanks banks_;
  TemporalKernels temporal_;
  FrameHistory<FrameRGB> history_;
  int frames_ = 0;
};

struct SequenceResult {
  std::vector<FieldMap> maps;
  std::vector<double> frame_ms;

  [[nodiscard]] double mean_ms() const;
};

SequenceResult run_sequence(const std::vector<FrameRGB>& frames, const EngineConfig& cfg, int threads = 1);

}  // namespace podvs
