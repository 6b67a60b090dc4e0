#include <doctest.h>

#include "oracles.hpp"
#include "podvs/normalization.hpp"
#include "test_util.hpp"

using namespace podvs;

namespace {

std::vector<LocalMax> maxima_oracle(const oracle::Img& m, int r, double t) {
  double gmax = m.v[0];
  for (double v : m.v) gmax = std::max(gmax, v);
  std::vector<LocalMax> out;
  for (int y = 0; y < m.h; ++y)
    for (int x = 0; x < m.w; ++x) {
      const double v = m.at(x, y);
      if (v < t * gmax) continue;
      bool ok = true;
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
          const int xx = x + dx, yy = y + dy;
          if ((dx || dy) && xx >= 0 && yy >= 0 && xx < m.w && yy < m.h && m.at(xx, yy) >= v) ok = false;
        }
      if (ok) out.push_back({x, y, v});
    }
  return out;
}

}  // namespace

TEST_CASE("local maxima match the oracle") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> size(1, 20), rad(1, 3);
  for (int t = 0; t < 150; ++t) {
    auto img = oracle::random_img(rng, size(rng), size(rng), 0.0, 1.0);
    if (t % 4 == 0)
      for (auto& v : img.v) v = std::round(v * 3);  // plateaus
    const LocalMaxParams p{rad(rng), t % 2 ? 0.05 : 0.5};
    const auto got = local_maxima(to_map(img), p);
    const auto want = maxima_oracle(img, p.radius, p.threshold);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].x == want[i].x);
      CHECK(got[i].y == want[i].y);
      CHECK(got[i].value == want[i].value);
    }
  }
}

TEST_CASE("plateaus are not peaks") {
  const FieldMap m = FieldMap::Constant(4, 4, 1.0);
  CHECK(local_maxima(m).empty());
}

TEST_CASE("N1 on hand-built maps") {
  FieldMap m = FieldMap::Zero(7, 7);
  m(1, 1) = 1.0;
  m(5, 5) = 0.5;
  CHECK((normalize_n1(m) - m * 0.25).abs().maxCoeff() < 1e-15);

  // A single peak keeps gain M^2.
  FieldMap s = FieldMap::Zero(5, 5);
  s(2, 2) = 0.8;
  CHECK(normalize_n1(s)(2, 2) == doctest::Approx(0.8 * 0.64));

  // Two equal peaks cancel.
  FieldMap e = FieldMap::Zero(7, 7);
  e(1, 1) = 1.0;
  e(5, 5) = 1.0;
  CHECK(normalize_n1(e).abs().maxCoeff() == 0.0);

  // Peaks under the threshold are ignored.
  FieldMap u = FieldMap::Zero(7, 7);
  u(1, 1) = 1.0;
  u(5, 5) = 0.01;
  CHECK(normalize_n1(u)(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("N1 promotes maps with one dominant peak") {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 100; ++t) {
    FieldMap noisy = random_map(rng, 12, 12, 0.0, 0.9);
    FieldMap single = noisy * 0.1;
    single(6, 6) = 1.0;
    noisy(6, 6) = 1.0;
    CHECK(normalize_n1(single).maxCoeff() >= normalize_n1(noisy).maxCoeff());
  }
}

TEST_CASE("rescale") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 100; ++t) {
    const FieldMap m = random_map(rng, 9, 7, -5.0, 3.0);
    const FieldMap r = rescale_unit(m);
    CHECK(r.minCoeff() == 0.0);
    CHECK(r.maxCoeff() == doctest::Approx(1.0));
  }
  CHECK(rescale_unit(FieldMap::Constant(3, 3, 2.0)).abs().maxCoeff() == 0.0);
  CHECK(normalize_n2(FieldMap::Constant(3, 3, 2.0)).abs().maxCoeff() == 0.0);
}

TEST_CASE("N2 is invariant to affine rescaling") {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 100; ++t) {
    const FieldMap m = random_map(rng, 10, 8);
    const FieldMap a = normalize_n2(m);
    const FieldMap b = normalize_n2(m * 7.0 + 3.0);
    CHECK((a - b).abs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("conspicuity collapses normalized levels") {
  std::mt19937_64 rng(31);
  ImagePyramid p;
  p.levels = {random_map(rng, 20, 16), random_map(rng, 14, 11)};
  const FieldMap c = conspicuity(p, {20, 16});
  const FieldMap want = normalize_n1(p.levels[0]) + resize_bilinear(normalize_n1(p.levels[1]), {20, 16});
  CHECK((c - want).abs().maxCoeff() < 1e-12);
}

TEST_CASE("fusion") {
  std::mt19937_64 rng(37);
  ChannelMaps maps;
  for (auto& m : maps) m = random_map(rng, 16, 12);
  const FieldMap f = fuse(maps);
  CHECK(f.minCoeff() == 0.0);
  CHECK(f.maxCoeff() == doctest::Approx(1.0));

  FieldMap total = FieldMap::Zero(12, 16);
  for (const auto& m : maps) total += normalize_n2(m);
  CHECK((f - rescale_unit(total)).abs().maxCoeff() < 1e-12);

  maps[4] = FieldMap::Zero(3, 3);
  CHECK_THROWS_AS(fuse(maps), DimensionError);
}

TEST_CASE("fusion parameters come from the configuration") {
  auto cfg = default_config();
  cfg.local_max_radius = 2;
  cfg.local_max_threshold = 0.2;
  cfg.n2_ceiling = 3.0;
  const auto p = fusion_params(cfg);
  CHECK(p.local_max.radius == 2);
  CHECK(p.local_max.threshold == 0.2);
  CHECK(p.n2_ceiling == 3.0);
}
