#pragma once

#include "podvs/core.hpp"
#include "podvs/filter.hpp"

#include <cstdint>

namespace podvs {

using RawMap = Grid<std::int64_t>;

/// Two's-complement (or unsigned) word with `fraction_bits` binary places.
struct FixedFormat {
  int total_bits = 18;
  int fraction_bits = 8;
  bool is_signed = true;

  [[nodiscard]] std::int64_t max_raw() const {
    return is_signed ? (std::int64_t{1} << (total_bits - 1)) - 1 : (std::int64_t{1} << total_bits) - 1;
  }
  [[nodiscard]] std::int64_t min_raw() const { return is_signed ? -(std::int64_t{1} << (total_bits - 1)) : 0; }
  [[nodiscard]] double ulp() const;
  [[nodiscard]] double max_value() const { return static_cast<double>(max_raw()) * ulp(); }
  [[nodiscard]] double min_value() const { return static_cast<double>(min_raw()) * ulp(); }

  /// Throws ConfigError for impossible widths.
  void validate() const;

  friend bool operator==(const FixedFormat&, const FixedFormat&) = default;
};

inline constexpr FixedFormat kPixelFormat{8, 0, false};
inline constexpr FixedFormat kSignedPixelFormat{8, 0, true};

/// Tally of clamping events; shared across a run.
struct SaturationCount {
  long long values = 0;       // results clamped to their format
  long long accumulator = 0;  // accumulator overflows

  [[nodiscard]] long long total() const { return values + accumulator; }
  SaturationCount& operator+=(const SaturationCount& o) {
    values += o.values;
    accumulator += o.accumulator;
    return *this;
  }
};

std::int64_t saturate(std::int64_t v, const FixedFormat& fmt, SaturationCount* sat = nullptr);

/// v / 2^shift rounded to nearest, ties to even. Negative shift multiplies.
std::int64_t round_shift(std::int64_t v, int shift);

/// Round-to-nearest-even then saturate.
std::int64_t quantize(double v, const FixedFormat& fmt, SaturationCount* sat = nullptr);
double dequantize(std::int64_t raw, const FixedFormat& fmt);

RawMap quantize(const FieldMap& m, const FixedFormat& fmt, SaturationCount* sat = nullptr);
FieldMap dequantize(const RawMap& m, const FixedFormat& fmt);

/// round(sqrt(v)) for v >= 0, by integer Newton iteration.
std::int64_t isqrt_round(std::int64_t v);

struct MacResult {
  std::int64_t raw = 0;  // in the output format
  int cycles = 0;
  bool overflow = false;
};

/// Cycles for an n x n weighted sum: one fetch, one multiply, one accumulate per tap.
constexpr int mac_cycles(int taps) { return 3 * taps; }

/// Dot product of a data patch and a coefficient kernel with one wide
/// accumulator and a single rounding into `out`.
MacResult mac_weighted_sum(const RawMap& patch, const FixedFormat& data, const RawMap& kernel, int coef_fraction_bits,
                           const FixedFormat& out, int accumulator_bits = 48, SaturationCount* sat = nullptr);

/// Correlation of a fixed-point map with integer coefficients. Each
/// output pixel is one mac_weighted_sum.
RawMap fixed_correlate(const RawMap& in, const FixedFormat& data, const RawMap& kernel, int coef_fraction_bits,
                       const FixedFormat& out, int accumulator_bits = 48, SaturationCount* sat = nullptr,
                       BorderMode border = BorderMode::Replicate);

}  // namespace podvs
