#include "podvs/channels.hpp"

namespace podvs {

std::string_view channel_name(ChannelId c) {
  switch (c) {
    case ChannelId::Intensity: return "I";
    case ChannelId::RG: return "RG";
    case ChannelId::GR: return "GR";
    case ChannelId::BY: return "BY";
    case ChannelId::YB: return "YB";
    case ChannelId::O0: return "O0";
    case ChannelId::O45: return "O45";
    case ChannelId::O90: return "O90";
    case ChannelId::O135: return "O135";
  }
  return "";
}

int orientation_index(ChannelId c) {
  switch (c) {
    case ChannelId::O0: return 0;
    case ChannelId::O45: return 1;
    case ChannelId::O90: return 2;
    case ChannelId::O135: return 3;
    default: return -1;
  }
}

bool is_signed_channel(ChannelId c) { return c == ChannelId::Intensity; }

FieldMap to_intensity(const FrameRGB& frame) {
  return (frame.r().cast<double>() + frame.g().cast<double>() + frame.b().cast<double>()) / 3.0;
}

RgbField to_field(const FrameRGB& frame) {
  return {frame.r().cast<double>(), frame.g().cast<double>(), frame.b().cast<double>()};
}

OpponencyMaps color_opponency(const RgbField& in) {
  if (dims_of(in.g) != dims_of(in.r) || dims_of(in.b) != dims_of(in.r))
    throw DimensionError("colour planes differ in size");
  const auto& r = in.r;
  const auto& g = in.g;
  const auto& b = in.b;

  const FieldMap R = (r - (g + b) / 2.0).max(0.0);
  const FieldMap G = (g - (r + b) / 2.0).max(0.0);
  const FieldMap B = (b - (r + g) / 2.0).max(0.0);
  const FieldMap Y = ((r + g) / 2.0 - (r - g).abs() / 2.0 - b).max(0.0);

  return {(R - G).max(0.0), (G - R).max(0.0), (B - Y).max(0.0), (Y - B).max(0.0)};
}

FieldMap orientation_input(const FrameRGB& frame) { return to_intensity(frame); }

TemporalKernels make_temporal_kernels(double frame_period_ms) {
  return {make_kernel(kStronglyPhasic, frame_period_ms), make_kernel(kWeaklyPhasic, frame_period_ms)};
}

ChannelMaps extract_all(const FrameHistory<FrameRGB>& history, const TemporalKernels& kernels) {
  if (history.empty()) throw Error("cannot extract channels from an empty history");

  const int depth = std::max(kernels.strong.size(), kernels.weak.size());
  std::vector<FieldMap> intensity, red, green, blue;
  for (int k = 0; k < depth; ++k) {
    const auto& f = history.at(k);
    intensity.push_back(to_intensity(f));
    red.push_back(f.r().cast<double>());
    green.push_back(f.g().cast<double>());
    blue.push_back(f.b().cast<double>());
  }

  const RgbField weak{apply_temporal(kernels.weak, red), apply_temporal(kernels.weak, green),
                      apply_temporal(kernels.weak, blue)};
  auto opp = color_opponency(weak);
  FieldMap orient = orientation_input(history.at(0));

  ChannelMaps out;
  out[0] = apply_temporal(kernels.strong, intensity);
  out[1] = std::move(opp.rg);
  out[2] = std::move(opp.gr);
  out[3] = std::move(opp.by);
  out[4] = std::move(opp.yb);
  for (int i = 5; i < kChannelCount; ++i) out[i] = orient;
  return out;
}

}  // namespace podvs
