#pragma once

#include "podvs/channels.hpp"
#include "podvs/pyramid.hpp"

#include <vector>

namespace podvs {

struct LocalMaxParams {
  int radius = 1;
  double threshold = 0.05;  // fraction of the global maximum
};

struct LocalMax {
  int x = 0;
  int y = 0;
  double value = 0.0;
};

/// Pixels strictly greater than every other pixel within `radius` (Chebyshev,
/// clipped to the map) and at least threshold * global max. Row-major order.
std::vector<LocalMax> local_maxima(const FieldMap& map, const LocalMaxParams& p = {});

/// map * (M - mean of the other local maxima)^2, M the global maximum.
FieldMap normalize_n1(const FieldMap& map, const LocalMaxParams& p = {});

/// Rescale to [0, ceiling] then N1. A constant map gives all zeros.
FieldMap normalize_n2(const FieldMap& map, double ceiling = 1.0, const LocalMaxParams& p = {});

/// Min-max rescale to [0, 1]; a constant map gives zeros.
FieldMap rescale_unit(const FieldMap& map);

/// N1 on every level, then bilinear collapse to `target`.
FieldMap conspicuity(const ImagePyramid& grouping, Dimensions target, const LocalMaxParams& p = {});

struct FusionParams {
  LocalMaxParams local_max;
  double n2_ceiling = 1.0;
};

FusionParams fusion_params(const EngineConfig& cfg);

/// N2 of each conspicuity map, summed in channel order and rescaled to [0, 1].
FieldMap fuse(const ChannelMaps& conspicuity_maps, const FusionParams& p = {});

}  // namespace podvs
