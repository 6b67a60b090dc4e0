#pragma once

#include "podvs/core.hpp"

#include <algorithm>

namespace podvs {

/// Copy of `in` grown by (ry, rx) on each side according to `mode`.
template <typename Acc, typename Derived>
Grid<Acc> pad(const Eigen::DenseBase<Derived>& in, Eigen::Index ry, Eigen::Index rx, BorderMode mode) {
  const Eigen::Index H = in.rows();
  const Eigen::Index W = in.cols();
  Grid<Acc> p = Grid<Acc>::Zero(H + 2 * ry, W + 2 * rx);
  p.block(ry, rx, H, W) = in.derived().template cast<Acc>();
  if (mode == BorderMode::Replicate && H > 0 && W > 0) {
    for (Eigen::Index y = 0; y < ry; ++y) {
      p.row(y).segment(rx, W) = p.row(ry).segment(rx, W);
      p.row(ry + H + y).segment(rx, W) = p.row(ry + H - 1).segment(rx, W);
    }
    for (Eigen::Index x = 0; x < rx; ++x) {
      p.col(x) = p.col(rx);
      p.col(rx + W + x) = p.col(rx + W - 1);
    }
  }
  return p;
}

/// 2-D correlation, accumulated in `Acc`:
///   out(y, x) = sum_{i,j} k(i, j) * in(y + i - kh/2, x + j - kw/2)
/// with out-of-range reads answered by `mode`. Taps are applied in row-major
/// order, so every pixel sees the same summation order regardless of image
/// size or threading.
template <typename Acc, typename DerivedIn, typename DerivedK>
Grid<Acc> correlate_as(const Eigen::DenseBase<DerivedIn>& in, const Eigen::DenseBase<DerivedK>& k,
                       BorderMode mode = BorderMode::Replicate) {
  const Eigen::Index H = in.rows();
  const Eigen::Index W = in.cols();
  const Eigen::Index ry = k.rows() / 2;
  const Eigen::Index rx = k.cols() / 2;
  const Grid<Acc> p = pad<Acc>(in, ry, rx, mode);

  Grid<Acc> out = Grid<Acc>::Zero(H, W);
  for (Eigen::Index i = 0; i < k.rows(); ++i)
    for (Eigen::Index j = 0; j < k.cols(); ++j) {
      const Acc w = static_cast<Acc>(k(i, j));
      if (w == Acc(0)) continue;
      out += w * p.block(i, j, H, W);
    }
  return out;
}

template <typename DerivedIn, typename DerivedK>
FieldMap correlate(const Eigen::DenseBase<DerivedIn>& in, const Eigen::DenseBase<DerivedK>& k,
                   BorderMode mode = BorderMode::Replicate) {
  return correlate_as<double>(in, k, mode);
}

/// True convolution: correlation with the kernel rotated by 180 degrees.
template <typename DerivedIn, typename DerivedK>
FieldMap convolve(const Eigen::DenseBase<DerivedIn>& in, const Eigen::DenseBase<DerivedK>& k,
                  BorderMode mode = BorderMode::Replicate) {
  using KScalar = typename DerivedK::Scalar;
  const Grid<KScalar> flipped = k.derived().reverse();
  return correlate_as<double>(in, flipped, mode);
}

template <typename Derived>
Grid<typename Derived::Scalar> rotate180(const Eigen::DenseBase<Derived>& k) {
  return k.derived().reverse();
}

}  // namespace podvs
