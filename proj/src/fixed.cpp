#include "podvs/fixed.hpp"

#include <cmath>

namespace podvs {

double FixedFormat::ulp() const { return std::ldexp(1.0, -fraction_bits); }

void FixedFormat::validate() const {
  if (total_bits < 2 || total_bits > 62) throw ConfigError("fixed format: total bits must be in [2, 62]");
  if (fraction_bits < 0 || fraction_bits > total_bits)
    throw ConfigError("fixed format: fraction bits must be in [0, total bits]");
}

std::int64_t saturate(std::int64_t v, const FixedFormat& fmt, SaturationCount* sat) {
  if (v > fmt.max_raw()) {
    if (sat) ++sat->values;
    return fmt.max_raw();
  }
  if (v < fmt.min_raw()) {
    if (sat) ++sat->values;
    return fmt.min_raw();
  }
  return v;
}

std::int64_t round_shift(std::int64_t v, int shift) {
  if (shift <= 0) return v * (std::int64_t{1} << -shift);
  const std::int64_t q = v >> shift;  // floor
  const std::int64_t rem = v - q * (std::int64_t{1} << shift);
  const std::int64_t half = std::int64_t{1} << (shift - 1);
  if (rem > half || (rem == half && (q & 1))) return q + 1;
  return q;
}

std::int64_t quantize(double v, const FixedFormat& fmt, SaturationCount* sat) {
  const double scaled = std::nearbyint(std::ldexp(v, fmt.fraction_bits));
  if (scaled > static_cast<double>(fmt.max_raw()) || scaled < static_cast<double>(fmt.min_raw())) {
    if (sat) ++sat->values;
    return scaled > 0 ? fmt.max_raw() : fmt.min_raw();
  }
  return static_cast<std::int64_t>(scaled);
}

double dequantize(std::int64_t raw, const FixedFormat& fmt) {
  return std::ldexp(static_cast<double>(raw), -fmt.fraction_bits);
}

RawMap quantize(const FieldMap& m, const FixedFormat& fmt, SaturationCount* sat) {
  RawMap out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.size(); ++i) out.data()[i] = quantize(m.data()[i], fmt, sat);
  return out;
}

FieldMap dequantize(const RawMap& m, const FixedFormat& fmt) {
  return m.cast<double>() * fmt.ulp();
}

std::int64_t isqrt_round(std::int64_t v) {
  if (v < 0) throw Error("isqrt of a negative value");
  if (v < 2) return v;
  // Newton from above converges to floor(sqrt(v)).
  std::int64_t x = v;
  std::int64_t y = (x + 1) / 2;
  while (y < x) {
    x = y;
    y = (x + v / x) / 2;
  }
  // Round: sqrt(v) >= x + 1/2  <=>  v > x^2 + x  for integer v.
  return (v - x * x > x) ? x + 1 : x;
}

namespace {

std::int64_t finish(std::int64_t acc, int shift, const FixedFormat& out, int accumulator_bits, SaturationCount* sat,
                    bool* overflow) {
  const std::int64_t acc_max = (std::int64_t{1} << (accumulator_bits - 1)) - 1;
  if (acc > acc_max || acc < -acc_max - 1) {
    acc = acc > 0 ? acc_max : -acc_max - 1;
    if (sat) ++sat->accumulator;
    if (overflow) *overflow = true;
  }
  return saturate(round_shift(acc, shift), out, sat);
}

}  // namespace

MacResult mac_weighted_sum(const RawMap& patch, const FixedFormat& data, const RawMap& kernel, int coef_fraction_bits,
                           const FixedFormat& out, int accumulator_bits, SaturationCount* sat) {
  if (patch.rows() != kernel.rows() || patch.cols() != kernel.cols())
    throw DimensionError("weighted sum: patch and kernel differ in size");
  std::int64_t acc = 0;
  for (Eigen::Index i = 0; i < patch.size(); ++i) acc += patch.data()[i] * kernel.data()[i];
  MacResult r;
  r.cycles = mac_cycles(static_cast<int>(patch.size()));
  r.raw = finish(acc, data.fraction_bits + coef_fraction_bits - out.fraction_bits, out, accumulator_bits, sat,
                 &r.overflow);
  return r;
}

RawMap fixed_correlate(const RawMap& in, const FixedFormat& data, const RawMap& kernel, int coef_fraction_bits,
                       const FixedFormat& out, int accumulator_bits, SaturationCount* sat, BorderMode border) {
  const RawMap acc = correlate_as<std::int64_t>(in, kernel, border);
  const int shift = data.fraction_bits + coef_fraction_bits - out.fraction_bits;
  RawMap res(acc.rows(), acc.cols());
  for (Eigen::Index i = 0; i < acc.size(); ++i)
    res.data()[i] = finish(acc.data()[i], shift, out, accumulator_bits, sat, nullptr);
  return res;
}

}  // namespace podvs
