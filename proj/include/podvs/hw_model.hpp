#pragma once

#include "podvs/fixed.hpp"
#include "podvs/pipeline.hpp"

#include <array>
#include <string>
#include <vector>

namespace podvs {

enum class HwStage { P1, P2, P3, P4, P5, P6, P7 };
inline constexpr int kHwStageCount = 7;

std::string_view stage_name(HwStage s);

/// Per-operation costs of the modelled 100 MHz datapath.
struct HwTiming {
  double clock_hz = 100e6;
  int ingest_cycles_per_pixel = 1;     // P1
  int pyramid_cycles_per_pixel = 5;    // P2, per pixel of the second level
  int fsm_load_cycles = 25;            // P3, P4, P7: fetch a 5x5 window
  int fsm_drain_cycles = 14;           // ... and write back through the pipeline
  int sum_cycles_per_term = 6;         // P5
  int modulate_cycles_per_pixel = 6;   // P6
  int word_bits = 8;                   // stored response width in block RAM
  // Host transfer and synchronisation per channel pass. Calibrated once so a
  // single channel at 112x84 reproduces 2.079 Hz; not derived from stage costs.
  long long host_allowance_cycles = 3'443'842;

  [[nodiscard]] int fsm_cycles_per_pixel() const { return fsm_load_cycles + mac_cycles(25) + fsm_drain_cycles; }
};

struct StageEntry {
  HwStage stage = HwStage::P1;
  long long cycles = 0;     // per channel pass
  long long bram_bits = 0;  // per channel
  std::string note;
};

struct HwProfile {
  ResolutionMode mode = ResolutionMode::Hw112;
  double parallel_channels = 1.0;
  double clock_hz = 100e6;
  long long host_allowance_cycles = 0;
  std::array<StageEntry, kHwStageCount> stages{};
  SaturationCount saturation;
  int frames = 0;

  [[nodiscard]] const StageEntry& stage(HwStage s) const { return stages[static_cast<int>(s)]; }
  [[nodiscard]] long long total_cycles() const;
  [[nodiscard]] long long critical_stage_cycles() const;
  [[nodiscard]] long long bram_bits() const;
  /// Sequential channel passes per frame (9 / parallel channels, may be fractional).
  [[nodiscard]] double passes() const;
  [[nodiscard]] double frame_interval_cycles() const;
  [[nodiscard]] double frame_rate_hz() const;
};

/// Channels processed side by side in the default build of each mode.
double default_parallel_channels(ResolutionMode m);

/// Closed-form ledger for one channel pass at the given mode.
HwProfile cycle_model(ResolutionMode m, double parallel_channels, const HwTiming& t = {});
HwProfile cycle_model(ResolutionMode m);

struct ResourceReport {
  ResolutionMode mode = ResolutionMode::Hw112;
  double channels = 1.0;
  std::array<long long, kHwStageCount> per_channel_bits{};
  std::array<double, kHwStageCount> bits{};  // scaled by `channels`

  [[nodiscard]] double total_bits() const;
};

/// Block RAM per stage, scaled linearly with the number of channels built.
ResourceReport resource_report(ResolutionMode m, double channels, const HwTiming& t = {});

std::string profile_text(const HwProfile& p);
std::string profile_json(const HwProfile& p);

/// Fixed-point run of the grouping datapath (P1-P7) for one channel input.
/// Returns the per-level grouping maps, dequantized, for host-side fusion.
ImagePyramid hw_channel_grouping(const FieldMap& input, bool signed_input, const KernelBanks& banks,
                                 const EngineConfig& cfg, OrientationSet orientations, SaturationCount* sat = nullptr);

class HwPipeline {
 public:
  explicit HwPipeline(EngineConfig cfg, int threads = 1, double parallel_channels = -1.0);

  FieldMap step(const FrameRGB& frame);
  FrameDetail step_detailed(const FrameRGB& frame);

  [[nodiscard]] const HwProfile& profile() const { return profile_; }
  [[nodiscard]] const EngineConfig& config() const { return cfg_; }

 private:
  EngineConfig cfg_;
  int threads_;
  KernelBanks banks_;
  TemporalKernels temporal_;
  FrameHistory<FrameRGB> history_;
  HwProfile profile_;
};

struct HwRun {
  std::vector<FieldMap> maps;
  HwProfile profile;
};

HwRun run_hw_pipeline(const std::vector<FrameRGB>& frames, const EngineConfig& cfg, int threads = 1);

}  // namespace podvs
