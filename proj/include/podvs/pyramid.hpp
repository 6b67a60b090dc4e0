#pragma once

#include "podvs/core.hpp"

#include <cstdint>
#include <vector>

namespace podvs {

/// Multi-resolution stack, level 0 finest.
template <typename Scalar>
struct Pyramid {
  std::vector<Grid<Scalar>> levels;

  [[nodiscard]] int depth() const { return static_cast<int>(levels.size()); }
  [[nodiscard]] Dimensions dims(int level) const { return dims_of(levels.at(level)); }
};

using ImagePyramid = Pyramid<double>;

/// round(base * 2^(-i/2)) for i in [0, depth). Throws if a level would be
/// smaller than 2x2.
std::vector<Dimensions> reference_level_dims(Dimensions base, int depth);

/// Three-level hardware pyramid: 112x84 -> {80x60, 56x44}, 80x60 -> {56x44, 40x30}.
std::vector<Dimensions> hw_level_dims(Dimensions base);

/// Fixed-point ratio q / 2^shift approximating src/dst, with q < 2^16 and the
/// largest shift that keeps it there.
struct ShiftRatio {
  std::uint32_t q = 0;
  int shift = 0;

  [[nodiscard]] int apply(int x) const {
    return static_cast<int>((static_cast<std::uint64_t>(x) * q) >> shift);
  }
  friend bool operator==(const ShiftRatio&, const ShiftRatio&) = default;
};

ShiftRatio make_shift_ratio(int src_len, int dst_len);

/// Source row/column for every destination row/column.
struct IndexMap {
  std::vector<int> rows;
  std::vector<int> cols;
};

enum class AddressMode {
  Exact,  // floor(x * src / dst)
  Shift,  // (x * q) >> shift, clamped to the source extent
};

IndexMap make_index_map(Dimensions src, Dimensions dst, AddressMode mode);

template <typename Scalar>
Grid<Scalar> resample_nearest(const Grid<Scalar>& src, const IndexMap& map) {
  Grid<Scalar> out(static_cast<Eigen::Index>(map.rows.size()), static_cast<Eigen::Index>(map.cols.size()));
  for (Eigen::Index y = 0; y < out.rows(); ++y)
    for (Eigen::Index x = 0; x < out.cols(); ++x) out(y, x) = src(map.rows[y], map.cols[x]);
  return out;
}

/// Bilinear resize with pixel-centre alignment and edge clamping.
FieldMap resize_bilinear(const FieldMap& src, Dimensions dst);

/// Successive bilinear downsampling in steps of sqrt(2).
ImagePyramid build_reference_pyramid(const FieldMap& map, int depth);

/// Nearest-neighbour pyramid whose source addresses use the shift approximation.
/// Every level is sampled directly from the full-resolution input.
template <typename Scalar>
Pyramid<Scalar> build_hw_pyramid(const Grid<Scalar>& map) {
  const auto base = dims_of(map);
  const auto dims = hw_level_dims(base);
  Pyramid<Scalar> p;
  p.levels.push_back(map);
  for (std::size_t i = 1; i < dims.size(); ++i)
    p.levels.push_back(resample_nearest(map, make_index_map(base, dims[i], AddressMode::Shift)));
  return p;
}

/// Sum of all levels after bilinear resizing to `target`.
FieldMap collapse(const ImagePyramid& pyr, Dimensions target);

}  // namespace podvs
