#pragma once

#include "podvs/core.hpp"

#include <array>
#include <deque>
#include <vector>

namespace podvs {

/// Parameters of the phasic temporal response
///   r(t) = alpha * (t - tau - delta) * exp(beta * (t - tau)^2),  t in ms into the past.
struct PhasicParams {
  double alpha;
  double beta;
  double tau_ms;
  double delta_ms;

  [[nodiscard]] double response(double t_ms) const;
};

/// Magnocellular (motion-sensitive) cell fit.
inline constexpr PhasicParams kStronglyPhasic{-0.00161, -0.00111, 86.2, 5.6};
/// Parvocellular (colour-preserving) cell fit.
inline constexpr PhasicParams kWeaklyPhasic{-0.000487, -0.000466, 116.0, 20.0};

/// Current frame plus five previous frames.
inline constexpr int kTemporalTaps = 6;

/// taps[k] weights the frame k frames in the past.
struct TemporalKernel {
  std::vector<double> taps;
  double frame_period_ms = 0.0;

  [[nodiscard]] int size() const { return static_cast<int>(taps.size()); }
  [[nodiscard]] double sum() const;
};

/// taps[k] = r(k * frame_period_ms).
TemporalKernel make_kernel(const PhasicParams& p, double frame_period_ms, int tap_count = kTemporalTaps);

/// Ratio |peak negative| / peak positive of r(t) sampled every `step_ms` over
/// [t_begin, t_end]. Larger means more strongly phasic.
double phasic_index(const PhasicParams& p, double step_ms = 0.1, double t_begin = 0.0, double t_end = 1000.0);

/// Bounded history of frames, newest first. Before the ring is full the oldest
/// available frame stands in for the missing ones.
template <typename Frame>
class FrameHistory {
 public:
  explicit FrameHistory(int capacity = kTemporalTaps) : capacity_(capacity) {
    if (capacity < 1) throw Error("frame history needs capacity >= 1");
  }

  void push(Frame f) {
    frames_.push_front(std::move(f));
    if (static_cast<int>(frames_.size()) > capacity_) frames_.pop_back();
  }

  [[nodiscard]] bool empty() const { return frames_.empty(); }
  [[nodiscard]] int stored() const { return static_cast<int>(frames_.size()); }
  [[nodiscard]] int capacity() const { return capacity_; }

  /// Frame `k` steps in the past (0 = newest), with warm-up padding.
  [[nodiscard]] const Frame& at(int k) const {
    if (frames_.empty()) throw Error("frame history is empty");
    return frames_[std::min<std::size_t>(static_cast<std::size_t>(k), frames_.size() - 1)];
  }

  void clear() { frames_.clear(); }

 private:
  int capacity_;
  std::deque<Frame> frames_;
};

/// out(y, x) = sum_k frames[k](y, x) * taps[k], where frames[0] is the newest.
/// Missing history is padded with the oldest supplied frame.
FieldMap apply_temporal(const TemporalKernel& kernel, const std::vector<FieldMap>& newest_first);

}  // namespace podvs
