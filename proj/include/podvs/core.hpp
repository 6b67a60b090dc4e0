#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace podvs {

/// Dense 2-D grid, row-major, indexed (row, col) == (y, x) with the origin at
/// the top-left pixel.
template <typename Scalar>
using Grid = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Real-valued activation map used by the reference pipeline.
using FieldMap = Grid<double>;
using Plane8 = Grid<std::uint8_t>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

struct Dimensions {
  int width = 0;
  int height = 0;

  [[nodiscard]] long pixels() const { return static_cast<long>(width) * height; }
  friend bool operator==(const Dimensions&, const Dimensions&) = default;
};

std::string to_string(Dimensions d);

template <typename Derived>
Dimensions dims_of(const Eigen::DenseBase<Derived>& g) {
  return {static_cast<int>(g.cols()), static_cast<int>(g.rows())};
}

/// 8-bit RGB video frame. All three planes share dimensions.
class FrameRGB {
 public:
  FrameRGB() = default;
  FrameRGB(Plane8 r, Plane8 g, Plane8 b);
  /// Uniform frame of one colour.
  static FrameRGB filled(Dimensions d, std::uint8_t r, std::uint8_t g, std::uint8_t b);

  [[nodiscard]] int width() const { return static_cast<int>(r_.cols()); }
  [[nodiscard]] int height() const { return static_cast<int>(r_.rows()); }
  [[nodiscard]] Dimensions dims() const { return {width(), height()}; }

  [[nodiscard]] const Plane8& r() const { return r_; }
  [[nodiscard]] const Plane8& g() const { return g_; }
  [[nodiscard]] const Plane8& b() const { return b_; }
  Plane8& r() { return r_; }
  Plane8& g() { return g_; }
  Plane8& b() { return b_; }

  void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    r_(y, x) = r;
    g_(y, x) = g;
    b_(y, x) = b;
  }

  friend bool operator==(const FrameRGB& a, const FrameRGB& b) {
    return a.dims() == b.dims() && (a.r_ == b.r_).all() && (a.g_ == b.g_).all() &&
           (a.b_ == b.b_).all();
  }

 private:
  Plane8 r_, g_, b_;
};

/// The three supported operating points. Each one fixes the grouping kernel
/// size and pyramid depth; there is no way to mix them.
enum class ResolutionMode { Reference640, Hw112, Hw80 };

Dimensions resolution_of(ResolutionMode m);
int kernel_size_of(ResolutionMode m);
int pyramid_depth_of(ResolutionMode m);
bool is_hw_resolution(ResolutionMode m);
std::string_view mode_name(ResolutionMode m);        // "reference" | "hw112" | "hw80"
std::string_view resolution_token(ResolutionMode m);  // "640x480" | "112x84" | "80x60"
ResolutionMode parse_mode(std::string_view text);     // accepts either spelling

/// How filters read pixels outside the image.
enum class BorderMode {
  Zero,       // absent neighbours read as 0
  Replicate,  // clamp the address to the nearest edge pixel
};

std::string_view border_name(BorderMode b);  // "zero" | "replicate"
BorderMode parse_border(std::string_view text);

struct EngineConfig {
  ResolutionMode mode = ResolutionMode::Reference640;
  BorderMode border = BorderMode::Replicate;
  double frame_rate_hz = 24.0;
  double inhibition_weight = 1.0;  // w_p
  double n2_ceiling = 1.0;         // M
  int local_max_radius = 1;
  double local_max_threshold = 0.05;
  // Fixed-point datapath (hardware model only).
  int fixed_total_bits = 18;
  int fixed_fraction_bits = 8;
  int coef_fraction_bits = 16;
  int accumulator_bits = 48;

  [[nodiscard]] Dimensions resolution() const { return resolution_of(mode); }
  [[nodiscard]] int kernel_size() const { return kernel_size_of(mode); }
  [[nodiscard]] int pyramid_depth() const { return pyramid_depth_of(mode); }
  [[nodiscard]] double frame_period_ms() const { return 1000.0 / frame_rate_hz; }

  /// Throws ConfigError naming the offending key.
  void validate() const;

  friend bool operator==(const EngineConfig&, const EngineConfig&) = default;
};

EngineConfig default_config(ResolutionMode m = ResolutionMode::Reference640);

/// Parses flat `key = value` lines. Blank lines and `#` comments are ignored,
/// unknown keys are errors.
EngineConfig parse_config(std::string_view text);
EngineConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const EngineConfig& cfg);

/// Throws DimensionError unless the frame matches the configured resolution.
void validate_frame(const FrameRGB& frame, const EngineConfig& cfg);

struct FixationRecord {
  std::string video;
  int frame = 0;
  int subject = 0;
  int x = 0;
  int y = 0;

  friend bool operator==(const FixationRecord&, const FixationRecord&) = default;
};

/// Throws DimensionError if any value is NaN or infinite.
void require_finite(const FieldMap& m, std::string_view what);

}  // namespace podvs
