#pragma once

#include "podvs/core.hpp"
#include "podvs/temporal.hpp"

#include <array>
#include <string_view>

namespace podvs {

enum class ChannelId { Intensity, RG, GR, BY, YB, O0, O45, O90, O135 };

inline constexpr int kChannelCount = 9;
inline constexpr std::array<ChannelId, kChannelCount> kAllChannels{
    ChannelId::Intensity, ChannelId::RG,  ChannelId::GR,  ChannelId::BY,  ChannelId::YB,
    ChannelId::O0,        ChannelId::O45, ChannelId::O90, ChannelId::O135};

std::string_view channel_name(ChannelId c);

/// Orientation index 0..3 for O_* channels, -1 otherwise.
int orientation_index(ChannelId c);

/// Whether the channel input can go negative (temporal output without rectification).
bool is_signed_channel(ChannelId c);

struct RgbField {
  FieldMap r, g, b;
};

struct OpponencyMaps {
  FieldMap rg, gr, by, yb;
};

using ChannelMaps = std::array<FieldMap, kChannelCount>;

/// (r + g + b) / 3.
FieldMap to_intensity(const FrameRGB& frame);

RgbField to_field(const FrameRGB& frame);

/// Half-wave rectified opponencies from the broadly tuned R, G, B, Y responses.
OpponencyMaps color_opponency(const RgbField& rgb);

/// Grayscale of the current frame; identical for all four orientation channels.
FieldMap orientation_input(const FrameRGB& frame);

struct TemporalKernels {
  TemporalKernel strong;
  TemporalKernel weak;
};

TemporalKernels make_temporal_kernels(double frame_period_ms);

/// Splits the newest frame of `history` into the nine channel inputs.
ChannelMaps extract_all(const FrameHistory<FrameRGB>& history, const TemporalKernels& kernels);

}  // namespace podvs
