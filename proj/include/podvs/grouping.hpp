#pragma once

#include "podvs/kernels.hpp"
#include "podvs/pyramid.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace podvs {

using OrientedMaps = std::array<FieldMap, kOrientations>;
using Mask = Grid<std::uint8_t>;

/// sqrt(even^2 + odd^2) per orientation.
OrientedMaps complex_edges(const FieldMap& in, const EdgeBank& bank, BorderMode border = BorderMode::Replicate);

struct CenterSurround {
  FieldMap on;   // rect(in * cs)
  FieldMap off;  // rect(-(in * cs))
};

CenterSurround center_surround(const FieldMap& in, const CenterSurroundBank& bank,
                               BorderMode border = BorderMode::Replicate);

/// Association field responses of the ON and OFF maps, per orientation and side.
struct VonMisesResponses {
  OrientedMaps on_left, on_right, off_left, off_right;
};

VonMisesResponses von_mises_filter(const CenterSurround& cs, const VonMisesBank& bank,
                                   BorderMode border = BorderMode::Replicate);

/// Cross-scale accumulation. Level l receives every coarser-or-equal level k
/// sampled back to its own size with nearest neighbour, weighted 2^-(k-l).
std::vector<FieldMap> von_mises_sum(const std::vector<FieldMap>& levels, AddressMode mode);
std::vector<VonMisesResponses> von_mises_sum(const std::vector<VonMisesResponses>& levels, AddressMode mode);

struct BorderOwnership {
  OrientedMaps light_left, light_right, dark_left, dark_right;
  OrientedMaps left, right;  // light + dark
};

BorderOwnership border_ownership(const OrientedMaps& edges, const VonMisesResponses& summed);

/// Winner-take-all side masks; ties go to the left side.
struct BoMasks {
  std::array<Mask, kOrientations> left, right;
};

BoMasks bo_masks(const BorderOwnership& bo);

/// GrpSum per orientation:
///   left  = (M_L . (B_L - w_p B_R)) conv v_left
///   right = (M_R . (B_R - w_p B_L)) conv v_right
struct GroupingActivity {
  OrientedMaps left, right, sum;
};

GroupingActivity grouping_activity(const BoMasks& masks, const BorderOwnership& bo, const VonMisesBank& bank,
                                   double w_p, BorderMode border = BorderMode::Replicate);

/// Which orientations contribute to a channel's grouping map.
struct OrientationSet {
  std::array<bool, kOrientations> use{true, true, true, true};

  static OrientationSet all() { return {}; }
  static OrientationSet only(int o) {
    OrientationSet s;
    s.use.fill(false);
    s.use.at(o) = true;
    return s;
  }
};

struct GroupingOptions {
  bool hw_pyramid = false;
  int depth = 10;
  AddressMode address = AddressMode::Exact;
  double w_p = 1.0;
  BorderMode border = BorderMode::Replicate;
  OrientationSet orientations;
};

GroupingOptions grouping_options(const EngineConfig& cfg, OrientationSet orientations = {});

/// Full per-channel chain: pyramid, edges, centre-surround, association
/// fields, cross-scale sum, border ownership and grouping. Returns
/// rect(sum over selected orientations of GrpSum) per pyramid level.
ImagePyramid channel_grouping(const FieldMap& input, const KernelBanks& banks, const GroupingOptions& opt);

}  // namespace podvs
