#include "podvs/synth.hpp"

#include <random>

namespace podvs {

namespace {

void fill_rect(FrameRGB& f, const Rect& r, std::uint8_t cr, std::uint8_t cg, std::uint8_t cb) {
  for (int y = std::max(0, r.y); y < std::min(f.height(), r.y + r.h); ++y)
    for (int x = std::max(0, r.x); x < std::min(f.width(), r.x + r.w); ++x) f.set(x, y, cr, cg, cb);
}

// 2x2-block binary texture; fixed seed so every run draws the same pattern.
void texture(FrameRGB& f, const Rect& r, std::uint8_t lo, std::uint8_t hi, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::bernoulli_distribution coin(0.5);
  for (int by = 0; by < r.h; by += 2)
    for (int bx = 0; bx < r.w; bx += 2) {
      const std::uint8_t v = coin(rng) ? hi : lo;
      fill_rect(f, {r.x + bx, r.y + by, std::min(2, r.w - bx), std::min(2, r.h - by)}, v, v, v);
    }
}

int side_of(Dimensions d) { return std::max(4, std::min(d.width, d.height) / 5); }

}  // namespace

SynthVideo synth_onset(Dimensions d, int frames, int onset) {
  SynthVideo v;
  v.name = "onset";
  v.onset = onset;
  const int s = side_of(d);
  v.target = {d.width / 4 - s / 2, d.height / 2 - s / 2, s, s};
  v.distractor = Rect{3 * d.width / 4 - s / 2, d.height / 2 - s / 2, s, s};
  FrameRGB bg = FrameRGB::filled(d, 128, 128, 128);
  texture(bg, *v.distractor, 104, 152, 7);
  for (int i = 0; i < frames; ++i) {
    FrameRGB f = bg;
    if (i >= onset) fill_rect(f, v.target, 255, 255, 255);
    v.frames.push_back(std::move(f));
  }
  return v;
}

SynthVideo synth_static_square(Dimensions d, int frames) {
  SynthVideo v;
  v.name = "static_square";
  const int s = side_of(d);
  v.target = {d.width / 2 - s / 2 + d.width / 8, d.height / 2 - s / 2, s, s};
  FrameRGB f = FrameRGB::filled(d, 0, 0, 0);
  fill_rect(f, v.target, 255, 255, 255);
  v.frames.assign(frames, f);
  return v;
}

SynthVideo synth_color_popout(Dimensions d, int frames) {
  SynthVideo v;
  v.name = "color_popout";
  const int s = std::max(3, side_of(d) / 2);
  FrameRGB f = FrameRGB::filled(d, 40, 40, 40);
  const int nx = 4, ny = 3;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const Rect r{(2 * i + 1) * d.width / (2 * nx) - s / 2, (2 * j + 1) * d.height / (2 * ny) - s / 2, s, s};
      if (i == 2 && j == 1) {
        v.target = r;
        fill_rect(f, r, 220, 30, 30);
      } else {
        fill_rect(f, r, 30, 200, 30);
      }
    }
  v.frames.assign(frames, f);
  return v;
}

SynthVideo synth_moving_bar(Dimensions d, int frames) {
  SynthVideo v;
  v.name = "moving_bar";
  const int bw = std::max(2, d.width / 16);
  const int bh = d.height / 2;
  FrameRGB bg = FrameRGB::filled(d, 90, 90, 90);
  texture(bg, {0, 0, d.width, d.height}, 80, 100, 11);
  for (int i = 0; i < frames; ++i) {
    FrameRGB f = bg;
    const Rect bar{d.width / 6 + 2 * i, d.height / 4, bw, bh};
    fill_rect(f, bar, 230, 230, 60);
    v.target = bar;
    v.frames.push_back(std::move(f));
  }
  return v;
}

std::vector<std::string> synth_names() { return {"onset", "static_square", "color_popout", "moving_bar"}; }

SynthVideo synth_by_name(const std::string& name, Dimensions d) {
  if (name == "onset") return synth_onset(d);
  if (name == "static_square") return synth_static_square(d);
  if (name == "color_popout") return synth_color_popout(d);
  if (name == "moving_bar") return synth_moving_bar(d);
  throw ConfigError("name: unknown synthetic video '" + name + "'");
}

std::vector<SynthVideo> synth_suite(Dimensions d) {
  std::vector<SynthVideo> out;
  for (const auto& n : synth_names()) out.push_back(synth_by_name(n, d));
  return out;
}

std::vector<FixationRecord> synth_fixations(const SynthVideo& v) {
  std::vector<FixationRecord> out;
  const Rect& t = v.target;
  const int qx = std::max(1, t.w / 4), qy = std::max(1, t.h / 4);
  const int dx[] = {-qx, qx, -qx, qx};
  const int dy[] = {-qy, -qy, qy, qy};
  for (int f = v.onset; f < static_cast<int>(v.frames.size()); ++f)
    for (int s = 0; s < 4; ++s) out.push_back({v.name, f, s, t.cx() + dx[s], t.cy() + dy[s]});
  return out;
}

}  // namespace podvs
