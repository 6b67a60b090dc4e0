#include "podvs/grouping.hpp"

#include "podvs/filter.hpp"

namespace podvs {

namespace {

bool used(const FieldMap& m) { return m.size() > 0; }

}  // namespace

OrientedMaps complex_edges(const FieldMap& in, const EdgeBank& bank, BorderMode border) {
  OrientedMaps out;
  for (int o = 0; o < kOrientations; ++o) {
    const FieldMap e = correlate(in, bank.even[o], border);
    const FieldMap d = correlate(in, bank.odd[o], border);
    out[o] = (e.square() + d.square()).sqrt();
  }
  return out;
}

CenterSurround center_surround(const FieldMap& in, const CenterSurroundBank& bank, BorderMode border) {
  const FieldMap r = correlate(in, bank.on, border);
  return {r.max(0.0), (-r).max(0.0)};
}

VonMisesResponses von_mises_filter(const CenterSurround& cs, const VonMisesBank& bank, BorderMode border) {
  VonMisesResponses v;
  for (int o = 0; o < kOrientations; ++o) {
    v.on_left[o] = correlate(cs.on, bank.left[o], border);
    v.on_right[o] = correlate(cs.on, bank.right[o], border);
    v.off_left[o] = correlate(cs.off, bank.left[o], border);
    v.off_right[o] = correlate(cs.off, bank.right[o], border);
  }
  return v;
}

std::vector<FieldMap> von_mises_sum(const std::vector<FieldMap>& levels, AddressMode mode) {
  std::vector<FieldMap> out(levels.size());
  for (std::size_t l = 0; l < levels.size(); ++l) {
    if (!used(levels[l])) continue;
    const Dimensions dl = dims_of(levels[l]);
    out[l] = levels[l];
    double w = 1.0;
    for (std::size_t k = l + 1; k < levels.size(); ++k) {
      w *= 0.5;
      out[l] += w * resample_nearest(levels[k], make_index_map(dims_of(levels[k]), dl, mode));
    }
  }
  return out;
}

std::vector<VonMisesResponses> von_mises_sum(const std::vector<VonMisesResponses>& levels, AddressMode mode) {
  std::vector<VonMisesResponses> out(levels.size());
  auto field = [&](auto member, int o) {
    std::vector<FieldMap> per_level;
    per_level.reserve(levels.size());
    for (const auto& v : levels) per_level.push_back((v.*member)[o]);
    const auto summed = von_mises_sum(per_level, mode);
    for (std::size_t l = 0; l < levels.size(); ++l) (out[l].*member)[o] = summed[l];
  };
  for (int o = 0; o < kOrientations; ++o) {
    field(&VonMisesResponses::on_left, o);
    field(&VonMisesResponses::on_right, o);
    field(&VonMisesResponses::off_left, o);
    field(&VonMisesResponses::off_right, o);
  }
  return out;
}

BorderOwnership border_ownership(const OrientedMaps& edges, const VonMisesResponses& s) {
  BorderOwnership b;
  for (int o = 0; o < kOrientations; ++o) {
    if (!used(edges[o]) || !used(s.on_left[o])) continue;
    b.light_left[o] = (edges[o] * s.on_left[o]).max(0.0);
    b.light_right[o] = (edges[o] * s.on_right[o]).max(0.0);
    b.dark_left[o] = (edges[o] * s.off_left[o]).max(0.0);
    b.dark_right[o] = (edges[o] * s.off_right[o]).max(0.0);
    b.left[o] = b.light_left[o] + b.dark_left[o];
    b.right[o] = b.light_right[o] + b.dark_right[o];
  }
  return b;
}

BoMasks bo_masks(const BorderOwnership& bo) {
  BoMasks m;
  for (int o = 0; o < kOrientations; ++o) {
    if (!used(bo.left[o])) continue;
    m.left[o] = (bo.left[o] >= bo.right[o]).cast<std::uint8_t>();
    m.right[o] = (bo.left[o] < bo.right[o]).cast<std::uint8_t>();
  }
  return m;
}

GroupingActivity grouping_activity(const BoMasks& masks, const BorderOwnership& bo, const VonMisesBank& bank,
                                   double w_p, BorderMode border) {
  GroupingActivity g;
  for (int o = 0; o < kOrientations; ++o) {
    if (!used(bo.left[o])) continue;
    const FieldMap left_in = masks.left[o].cast<double>() * (bo.left[o] - w_p * bo.right[o]);
    const FieldMap right_in = masks.right[o].cast<double>() * (bo.right[o] - w_p * bo.left[o]);
    g.left[o] = convolve(left_in, bank.left[o], border);
    g.right[o] = convolve(right_in, bank.right[o], border);
    g.sum[o] = g.left[o] + g.right[o];
  }
  return g;
}

GroupingOptions grouping_options(const EngineConfig& cfg, OrientationSet orientations) {
  GroupingOptions o;
  o.hw_pyramid = is_hw_resolution(cfg.mode);
  o.depth = cfg.pyramid_depth();
  o.address = o.hw_pyramid ? AddressMode::Shift : AddressMode::Exact;
  o.w_p = cfg.inhibition_weight;
  o.border = cfg.border;
  o.orientations = orientations;
  return o;
}

ImagePyramid channel_grouping(const FieldMap& input, const KernelBanks& banks, const GroupingOptions& opt) {
  const ImagePyramid pyr = opt.hw_pyramid ? build_hw_pyramid(input) : build_reference_pyramid(input, opt.depth);
  const int depth = pyr.depth();

  std::vector<OrientedMaps> edges(depth);
  std::vector<VonMisesResponses> vm(depth);
  for (int l = 0; l < depth; ++l) {
    const FieldMap& level = pyr.levels[l];
    const BorderMode border = opt.border;
    const CenterSurround cs = center_surround(level, banks.cs, border);
    for (int o = 0; o < kOrientations; ++o) {
      if (!opt.orientations.use[o]) continue;
      const FieldMap e = correlate(level, banks.edge.even[o], border);
      const FieldMap d = correlate(level, banks.edge.odd[o], border);
      edges[l][o] = (e.square() + d.square()).sqrt();
      vm[l].on_left[o] = correlate(cs.on, banks.vm.left[o], border);
      vm[l].on_right[o] = correlate(cs.on, banks.vm.right[o], border);
      vm[l].off_left[o] = correlate(cs.off, banks.vm.left[o], border);
      vm[l].off_right[o] = correlate(cs.off, banks.vm.right[o], border);
    }
  }

  const auto summed = von_mises_sum(vm, opt.address);

  ImagePyramid out;
  out.levels.reserve(depth);
  for (int l = 0; l < depth; ++l) {
    const BorderOwnership bo = border_ownership(edges[l], summed[l]);
    const GroupingActivity g = grouping_activity(bo_masks(bo), bo, banks.vm, opt.w_p, opt.border);
    FieldMap total = FieldMap::Zero(pyr.levels[l].rows(), pyr.levels[l].cols());
    for (int o = 0; o < kOrientations; ++o)
      if (opt.orientations.use[o]) total += g.sum[o];
    out.levels.push_back(total.max(0.0));
  }
  return out;
}

}  // namespace podvs
