#pragma once

#include "podvs/core.hpp"

#include <optional>
#include <string>
#include <vector>

namespace podvs {

struct Rect {
  int x = 0, y = 0, w = 0, h = 0;

  [[nodiscard]] bool contains(int px, int py) const { return px >= x && px < x + w && py >= y && py < y + h; }
  [[nodiscard]] int cx() const { return x + w / 2; }
  [[nodiscard]] int cy() const { return y + h / 2; }
};

/// Generated test clip with the ground truth needed for location checks.
struct SynthVideo {
  std::string name;
  std::vector<FrameRGB> frames;
  Rect target;
  std::optional<Rect> distractor;
  int onset = 0;  // first frame in which the target is visible
};

/// Gray background with a static gray texture patch; a white square appears at `onset`.
SynthVideo synth_onset(Dimensions d, int frames = 16, int onset = 10);
/// One white square on black, present from the first frame.
SynthVideo synth_static_square(Dimensions d, int frames = 6);
/// Red square among green ones on a dark background.
SynthVideo synth_color_popout(Dimensions d, int frames = 8);
/// Bright bar moving right by two pixels per frame over a textured background.
SynthVideo synth_moving_bar(Dimensions d, int frames = 12);

/// Names accepted by synth_by_name, in suite order.
std::vector<std::string> synth_names();
SynthVideo synth_by_name(const std::string& name, Dimensions d);
/// The frozen suite used for fidelity checks: every generator at `d`.
std::vector<SynthVideo> synth_suite(Dimensions d);

/// Fixations inside the target from its onset onward, one subject per corner
/// offset; handy for exercising the evaluation path.
std::vector<FixationRecord> synth_fixations(const SynthVideo& v);

}  // namespace podvs
