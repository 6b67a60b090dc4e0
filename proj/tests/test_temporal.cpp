#include <doctest.h>

#include "oracles.hpp"
#include "podvs/temporal.hpp"
#include "test_util.hpp"

using namespace podvs;

namespace {

const double kPeriod = 1000.0 / 24.0;

}  // namespace

TEST_CASE("taps match direct evaluation of the response") {
  for (const auto& p : {kStronglyPhasic, kWeaklyPhasic}) {
    const auto k = make_kernel(p, kPeriod);
    REQUIRE(k.size() == 6);
    for (int i = 0; i < 6; ++i)
      CHECK(std::abs(k.taps[i] - oracle::phasic(p.alpha, p.beta, p.tau_ms, p.delta_ms, i * kPeriod)) <= 1e-12);
  }
}

TEST_CASE("tap sign patterns") {
  const auto s = make_kernel(kStronglyPhasic, kPeriod);
  const auto w = make_kernel(kWeaklyPhasic, kPeriod);
  const int strong_signs[] = {1, 1, 1, -1, -1, -1};
  const int weak_signs[] = {1, 1, 1, 1, -1, -1};
  for (int i = 0; i < 6; ++i) {
    CHECK((s.taps[i] > 0 ? 1 : -1) == strong_signs[i]);
    CHECK((w.taps[i] > 0 ? 1 : -1) == weak_signs[i]);
  }
}

TEST_CASE("strong kernel third tap") {
  // 83.3 ms into the past; published as roughly 0.01356.
  const auto s = make_kernel(kStronglyPhasic, kPeriod);
  CHECK(s.taps[2] == doctest::Approx(0.01356).epsilon(0.01));
}

TEST_CASE("the strongly phasic cell has the deeper negative lobe") {
  const double strong = phasic_index(kStronglyPhasic);
  const double weak = phasic_index(kWeaklyPhasic);
  CHECK(strong > weak);
  CHECK(strong > 0.0);
  CHECK(weak > 0.0);
}

TEST_CASE("kernel construction errors") {
  CHECK_THROWS(make_kernel(kStronglyPhasic, 0.0));
  CHECK_THROWS(make_kernel(kStronglyPhasic, kPeriod, 0));
  CHECK(make_kernel(kStronglyPhasic, 1000.0 / 30.0).frame_period_ms == doctest::Approx(33.333333));
}

TEST_CASE("history keeps the newest frames and pads with the oldest") {
  FrameHistory<int> h(3);
  CHECK(h.empty());
  CHECK_THROWS((void)h.at(0));
  h.push(1);
  CHECK(h.at(0) == 1);
  CHECK(h.at(5) == 1);
  h.push(2);
  h.push(3);
  h.push(4);
  CHECK(h.stored() == 3);
  CHECK(h.at(0) == 4);
  CHECK(h.at(1) == 3);
  CHECK(h.at(2) == 2);
  CHECK(h.at(9) == 2);
  CHECK_THROWS(FrameHistory<int>(0));
}

TEST_CASE("temporal convolution matches the brute-force oracle") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> size(1, 9), count(1, 8);
  for (int trial = 0; trial < 120; ++trial) {
    const int w = size(rng), h = size(rng), n = count(rng);
    const auto& p = trial % 2 ? kStronglyPhasic : kWeaklyPhasic;
    const auto k = make_kernel(p, kPeriod);
    std::vector<oracle::Img> imgs;
    std::vector<FieldMap> maps;
    for (int i = 0; i < n; ++i) {
      imgs.push_back(oracle::random_img(rng, w, h, 0.0, 255.0));
      maps.push_back(to_map(imgs.back()));
    }
    CHECK(max_abs_diff(apply_temporal(k, maps), oracle::temporal(k.taps, imgs)) <= 1e-12);
  }
}

TEST_CASE("static input is scaled by the tap sum") {
  const auto k = make_kernel(kStronglyPhasic, kPeriod);
  const FieldMap f = FieldMap::Constant(3, 4, 100.0);
  const FieldMap out = apply_temporal(k, {f});
  CHECK((out - 100.0 * k.sum()).abs().maxCoeff() < 1e-12);
}

TEST_CASE("temporal input checks") {
  const auto k = make_kernel(kStronglyPhasic, kPeriod);
  CHECK_THROWS(apply_temporal(k, {}));
  CHECK_THROWS_AS(apply_temporal(k, {FieldMap::Zero(2, 2), FieldMap::Zero(3, 2)}), DimensionError);
}
