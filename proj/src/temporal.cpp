#include "podvs/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace podvs {

double PhasicParams::response(double t_ms) const {
  const double shifted = t_ms - tau_ms;
  return alpha * (shifted - delta_ms) * std::exp(beta * shifted * shifted);
}

double TemporalKernel::sum() const { return std::accumulate(taps.begin(), taps.end(), 0.0); }

TemporalKernel make_kernel(const PhasicParams& p, double frame_period_ms, int tap_count) {
  if (!(frame_period_ms > 0.0)) throw Error("frame period must be positive");
  if (tap_count < 1) throw Error("tap count must be >= 1");
  TemporalKernel k;
  k.frame_period_ms = frame_period_ms;
  k.taps.resize(tap_count);
  for (int i = 0; i < tap_count; ++i) k.taps[i] = p.response(i * frame_period_ms);
  return k;
}

double phasic_index(const PhasicParams& p, double step_ms, double t_begin, double t_end) {
  double peak_pos = 0.0;
  double peak_neg = 0.0;
  const long n = static_cast<long>(std::floor((t_end - t_begin) / step_ms));
  for (long i = 0; i <= n; ++i) {
    const double v = p.response(t_begin + i * step_ms);
    peak_pos = std::max(peak_pos, v);
    peak_neg = std::min(peak_neg, v);
  }
  if (peak_pos <= 0.0) throw Error("temporal response has no positive lobe");
  return -peak_neg / peak_pos;
}

FieldMap apply_temporal(const TemporalKernel& kernel, const std::vector<FieldMap>& newest_first) {
  if (newest_first.empty()) throw Error("temporal filter needs at least one frame");
  const auto d = dims_of(newest_first.front());
  for (const auto& f : newest_first)
    if (dims_of(f) != d) throw DimensionError("history frames differ in size");

  FieldMap out = FieldMap::Zero(d.height, d.width);
  const int available = static_cast<int>(newest_first.size());
  for (int k = 0; k < kernel.size(); ++k) {
    const auto& frame = newest_first[std::min(k, available - 1)];
    out += kernel.taps[k] * frame;
  }
  return out;
}

}  // namespace podvs
