#include "podvs/pyramid.hpp"

#include <cmath>

namespace podvs {

std::vector<Dimensions> reference_level_dims(Dimensions base, int depth) {
  if (depth < 1) throw Error("pyramid depth must be >= 1");
  std::vector<Dimensions> out;
  for (int i = 0; i < depth; ++i) {
    const double f = std::pow(2.0, -0.5 * i);
    Dimensions d{static_cast<int>(std::lround(base.width * f)), static_cast<int>(std::lround(base.height * f))};
    if (d.width < 2 || d.height < 2)
      throw Error("pyramid depth " + std::to_string(depth) + " is too deep for " + to_string(base) + " (level " +
                  std::to_string(i) + " would be " + to_string(d) + ")");
    out.push_back(d);
  }
  return out;
}

std::vector<Dimensions> hw_level_dims(Dimensions base) {
  if (base == Dimensions{112, 84}) return {{112, 84}, {80, 60}, {56, 44}};
  if (base == Dimensions{80, 60}) return {{80, 60}, {56, 44}, {40, 30}};
  throw DimensionError("hardware pyramid needs a 112x84 or 80x60 input, got " + to_string(base));
}

ShiftRatio make_shift_ratio(int src_len, int dst_len) {
  if (src_len <= 0 || dst_len <= 0) throw Error("shift ratio needs positive lengths");
  ShiftRatio best{};
  for (int s = 0; s <= 31; ++s) {
    const std::uint64_t num = (static_cast<std::uint64_t>(src_len) << s);
    const std::uint64_t q = (2 * num + dst_len) / (2 * static_cast<std::uint64_t>(dst_len));
    if (q >= (1u << 16)) break;
    best = {static_cast<std::uint32_t>(q), s};
  }
  return best;
}

IndexMap make_index_map(Dimensions src, Dimensions dst, AddressMode mode) {
  auto axis = [mode](int src_len, int dst_len) {
    std::vector<int> idx(dst_len);
    const auto ratio = make_shift_ratio(src_len, dst_len);
    for (int i = 0; i < dst_len; ++i) {
      const int v = mode == AddressMode::Exact
                        ? static_cast<int>(static_cast<long>(i) * src_len / dst_len)
                        : ratio.apply(i);
      idx[i] = std::min(v, src_len - 1);
    }
    return idx;
  };
  return {axis(src.height, dst.height), axis(src.width, dst.width)};
}

namespace {

struct Taps {
  std::vector<int> lo, hi;
  std::vector<double> w;  // weight of `hi`
};

Taps bilinear_taps(int src_len, int dst_len) {
  Taps t;
  t.lo.resize(dst_len);
  t.hi.resize(dst_len);
  t.w.resize(dst_len);
  const double scale = static_cast<double>(src_len) / dst_len;
  for (int i = 0; i < dst_len; ++i) {
    double s = (i + 0.5) * scale - 0.5;
    s = std::clamp(s, 0.0, static_cast<double>(src_len - 1));
    const int lo = static_cast<int>(std::floor(s));
    const int hi = std::min(lo + 1, src_len - 1);
    t.lo[i] = lo;
    t.hi[i] = hi;
    t.w[i] = s - lo;
  }
  return t;
}

}  // namespace

FieldMap resize_bilinear(const FieldMap& src, Dimensions dst) {
  if (dst.width <= 0 || dst.height <= 0) throw DimensionError("resize target has no pixels");
  if (dims_of(src) == dst) return src;

  const auto tx = bilinear_taps(static_cast<int>(src.cols()), dst.width);
  const auto ty = bilinear_taps(static_cast<int>(src.rows()), dst.height);

  FieldMap horiz(src.rows(), dst.width);
  for (int x = 0; x < dst.width; ++x)
    horiz.col(x) = (1.0 - tx.w[x]) * src.col(tx.lo[x]) + tx.w[x] * src.col(tx.hi[x]);

  FieldMap out(dst.height, dst.width);
  for (int y = 0; y < dst.height; ++y)
    out.row(y) = (1.0 - ty.w[y]) * horiz.row(ty.lo[y]) + ty.w[y] * horiz.row(ty.hi[y]);
  return out;
}

ImagePyramid build_reference_pyramid(const FieldMap& map, int depth) {
  const auto dims = reference_level_dims(dims_of(map), depth);
  ImagePyramid p;
  p.levels.reserve(dims.size());
  p.levels.push_back(map);
  for (std::size_t i = 1; i < dims.size(); ++i) p.levels.push_back(resize_bilinear(p.levels.back(), dims[i]));
  return p;
}

FieldMap collapse(const ImagePyramid& pyr, Dimensions target) {
  if (pyr.levels.empty()) throw Error("cannot collapse an empty pyramid");
  FieldMap out = FieldMap::Zero(target.height, target.width);
  for (const auto& level : pyr.levels) out += resize_bilinear(level, target);
  return out;
}

}  // namespace podvs
