#include "podvs/core.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace podvs {

std::string to_string(Dimensions d) {
  return std::to_string(d.width) + "x" + std::to_string(d.height);
}

FrameRGB::FrameRGB(Plane8 r, Plane8 g, Plane8 b) : r_(std::move(r)), g_(std::move(g)), b_(std::move(b)) {
  if (r_.size() == 0) throw DimensionError("frame has no pixels");
  if (dims_of(g_) != dims_of(r_) || dims_of(b_) != dims_of(r_))
    throw DimensionError("frame planes differ in size");
}

FrameRGB FrameRGB::filled(Dimensions d, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  if (d.width <= 0 || d.height <= 0) throw DimensionError("frame has no pixels");
  return FrameRGB(Plane8::Constant(d.height, d.width, r), Plane8::Constant(d.height, d.width, g),
                  Plane8::Constant(d.height, d.width, b));
}

Dimensions resolution_of(ResolutionMode m) {
  switch (m) {
    case ResolutionMode::Reference640: return {640, 480};
    case ResolutionMode::Hw112: return {112, 84};
    case ResolutionMode::Hw80: return {80, 60};
  }
  return {};
}

int kernel_size_of(ResolutionMode m) { return m == ResolutionMode::Reference640 ? 11 : 5; }
int pyramid_depth_of(ResolutionMode m) { return m == ResolutionMode::Reference640 ? 10 : 3; }
bool is_hw_resolution(ResolutionMode m) { return m != ResolutionMode::Reference640; }

std::string_view mode_name(ResolutionMode m) {
  switch (m) {
    case ResolutionMode::Reference640: return "reference";
    case ResolutionMode::Hw112: return "hw112";
    case ResolutionMode::Hw80: return "hw80";
  }
  return "";
}

std::string_view resolution_token(ResolutionMode m) {
  switch (m) {
    case ResolutionMode::Reference640: return "640x480";
    case ResolutionMode::Hw112: return "112x84";
    case ResolutionMode::Hw80: return "80x60";
  }
  return "";
}

ResolutionMode parse_mode(std::string_view text) {
  for (auto m : {ResolutionMode::Reference640, ResolutionMode::Hw112, ResolutionMode::Hw80}) {
    if (text == mode_name(m) || text == resolution_token(m)) return m;
  }
  throw ConfigError("unknown resolution mode '" + std::string(text) + "'");
}

std::string_view border_name(BorderMode b) { return b == BorderMode::Zero ? "zero" : "replicate"; }

BorderMode parse_border(std::string_view text) {
  if (text == "zero") return BorderMode::Zero;
  if (text == "replicate") return BorderMode::Replicate;
  throw ConfigError("border: expected 'zero' or 'replicate', got '" + std::string(text) + "'");
}

void EngineConfig::validate() const {
  auto fail = [](const char* key, const std::string& why) {
    throw ConfigError(std::string(key) + ": " + why);
  };
  if (!(frame_rate_hz > 0.0) || !std::isfinite(frame_rate_hz)) fail("frame_rate", "frame rate must be positive");
  if (!(inhibition_weight >= 0.0) || !std::isfinite(inhibition_weight)) fail("w_p", "must be a finite value >= 0");
  if (!(n2_ceiling > 0.0) || !std::isfinite(n2_ceiling)) fail("n2_ceiling", "must be positive");
  if (local_max_radius < 1) fail("local_max_radius", "must be >= 1");
  if (!(local_max_threshold > 0.0 && local_max_threshold < 1.0)) fail("local_max_threshold", "must lie in (0, 1)");
  if (fixed_total_bits < 2 || fixed_total_bits > 32) fail("fixed_total_bits", "must lie in [2, 32]");
  if (fixed_fraction_bits < 0 || fixed_fraction_bits >= fixed_total_bits)
    fail("fixed_fraction_bits", "must lie in [0, fixed_total_bits)");
  if (coef_fraction_bits < 1 || coef_fraction_bits > 24) fail("coef_fraction_bits", "must lie in [1, 24]");
  if (accumulator_bits < 16 || accumulator_bits > 63) fail("accumulator_bits", "must lie in [16, 63]");
}

EngineConfig default_config(ResolutionMode m) {
  EngineConfig c;
  c.mode = m;
  return c;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

double to_double(std::string_view key, std::string_view v) {
  double out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw ConfigError(std::string(key) + ": expected a number, got '" + std::string(v) + "'");
  return out;
}

int to_int(std::string_view key, std::string_view v) {
  int out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw ConfigError(std::string(key) + ": expected an integer, got '" + std::string(v) + "'");
  return out;
}

}  // namespace

EngineConfig parse_config(std::string_view text) {
  EngineConfig cfg;
  int kernel_size = -1;
  int pyramid_levels = -1;
  int line_no = 0;

  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));

    if (key == "resolution" || key == "mode") {
      cfg.mode = parse_mode(value);
    } else if (key == "border") {
      cfg.border = parse_border(value);
    } else if (key == "kernel_size") {
      kernel_size = to_int(key, value);
    } else if (key == "pyramid_levels") {
      pyramid_levels = to_int(key, value);
    } else if (key == "frame_rate") {
      cfg.frame_rate_hz = to_double(key, value);
    } else if (key == "w_p") {
      cfg.inhibition_weight = to_double(key, value);
    } else if (key == "n2_ceiling") {
      cfg.n2_ceiling = to_double(key, value);
    } else if (key == "local_max_radius") {
      cfg.local_max_radius = to_int(key, value);
    } else if (key == "local_max_threshold") {
      cfg.local_max_threshold = to_double(key, value);
    } else if (key == "fixed_total_bits") {
      cfg.fixed_total_bits = to_int(key, value);
    } else if (key == "fixed_fraction_bits") {
      cfg.fixed_fraction_bits = to_int(key, value);
    } else if (key == "coef_fraction_bits") {
      cfg.coef_fraction_bits = to_int(key, value);
    } else if (key == "accumulator_bits") {
      cfg.accumulator_bits = to_int(key, value);
    } else {
      throw ConfigError(std::string(key) + ": unknown key");
    }
  }

  // Kernel size and depth are implied by the resolution; they may be restated but not changed.
  if (kernel_size >= 0 && kernel_size != cfg.kernel_size())
    throw ConfigError("kernel_size: resolution " + std::string(resolution_token(cfg.mode)) + " requires " +
                      std::to_string(cfg.kernel_size()));
  if (pyramid_levels >= 0 && pyramid_levels != cfg.pyramid_depth())
    throw ConfigError("pyramid_levels: resolution " + std::string(resolution_token(cfg.mode)) + " requires " +
                      std::to_string(cfg.pyramid_depth()));

  cfg.validate();
  return cfg;
}

EngineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const EngineConfig& cfg) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "resolution = " << resolution_token(cfg.mode) << '\n'
     << "border = " << border_name(cfg.border) << '\n'
     << "kernel_size = " << cfg.kernel_size() << '\n'
     << "pyramid_levels = " << cfg.pyramid_depth() << '\n'
     << "frame_rate = " << cfg.frame_rate_hz << '\n'
     << "w_p = " << cfg.inhibition_weight << '\n'
     << "n2_ceiling = " << cfg.n2_ceiling << '\n'
     << "local_max_radius = " << cfg.local_max_radius << '\n'
     << "local_max_threshold = " << cfg.local_max_threshold << '\n'
     << "fixed_total_bits = " << cfg.fixed_total_bits << '\n'
     << "fixed_fraction_bits = " << cfg.fixed_fraction_bits << '\n'
     << "coef_fraction_bits = " << cfg.coef_fraction_bits << '\n'
     << "accumulator_bits = " << cfg.accumulator_bits << '\n';
  return os.str();
}

void validate_frame(const FrameRGB& frame, const EngineConfig& cfg) {
  if (frame.width() <= 0 || frame.height() <= 0) throw DimensionError("frame has no pixels");
  if (frame.dims() != cfg.resolution())
    throw DimensionError("frame is " + to_string(frame.dims()) + " but the configuration expects " +
                         to_string(cfg.resolution()));
}

void require_finite(const FieldMap& m, std::string_view what) {
  if (!m.isFinite().all()) throw DimensionError(std::string(what) + " contains non-finite values");
}

}  // namespace podvs
