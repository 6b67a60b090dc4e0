#include "podvs/normalization.hpp"

#include <algorithm>

namespace podvs {

std::vector<LocalMax> local_maxima(const FieldMap& map, const LocalMaxParams& p) {
  std::vector<LocalMax> out;
  if (map.size() == 0) return out;
  const double floor_value = p.threshold * map.maxCoeff();
  const int H = static_cast<int>(map.rows());
  const int W = static_cast<int>(map.cols());
  const int r = p.radius;
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      const double v = map(y, x);
      if (v < floor_value) continue;
      bool peak = true;
      for (int yy = std::max(0, y - r); peak && yy <= std::min(H - 1, y + r); ++yy)
        for (int xx = std::max(0, x - r); xx <= std::min(W - 1, x + r); ++xx) {
          if ((yy != y || xx != x) && map(yy, xx) >= v) {
            peak = false;
            break;
          }
        }
      if (peak) out.push_back({x, y, v});
    }
  }
  return out;
}

FieldMap normalize_n1(const FieldMap& map, const LocalMaxParams& p) {
  if (map.size() == 0) return map;
  const double m = map.maxCoeff();
  const auto peaks = local_maxima(map, p);
  // Drop one occurrence of the global maximum; average the rest.
  double sum = 0.0;
  int count = 0;
  bool dropped = false;
  for (const auto& pk : peaks) {
    if (!dropped && pk.value == m) {
      dropped = true;
      continue;
    }
    sum += pk.value;
    ++count;
  }
  const double mbar = count > 0 ? sum / count : 0.0;
  const double gain = (m - mbar) * (m - mbar);
  return map * gain;
}

FieldMap rescale_unit(const FieldMap& map) {
  if (map.size() == 0) return map;
  const double lo = map.minCoeff();
  const double hi = map.maxCoeff();
  if (!(hi > lo)) return FieldMap::Zero(map.rows(), map.cols());
  return (map - lo) / (hi - lo);
}

FieldMap normalize_n2(const FieldMap& map, double ceiling, const LocalMaxParams& p) {
  return normalize_n1(rescale_unit(map) * ceiling, p);
}

FieldMap conspicuity(const ImagePyramid& grouping, Dimensions target, const LocalMaxParams& p) {
  ImagePyramid normalized;
  normalized.levels.reserve(grouping.levels.size());
  for (const auto& level : grouping.levels) normalized.levels.push_back(normalize_n1(level, p));
  return collapse(normalized, target);
}

FusionParams fusion_params(const EngineConfig& cfg) {
  return {{cfg.local_max_radius, cfg.local_max_threshold}, cfg.n2_ceiling};
}

FieldMap fuse(const ChannelMaps& maps, const FusionParams& p) {
  const Dimensions d = dims_of(maps[0]);
  FieldMap total = FieldMap::Zero(d.height, d.width);
  for (const auto& m : maps) {
    if (dims_of(m) != d) throw DimensionError("conspicuity maps differ in size: " + to_string(dims_of(m)) + " vs " + to_string(d));
    total += normalize_n2(m, p.n2_ceiling, p.local_max);
  }
  return rescale_unit(total);
}

}  // namespace podvs
