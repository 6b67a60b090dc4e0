#include <doctest.h>

#include "oracles.hpp"
#include "podvs/grouping.hpp"
#include "test_util.hpp"

using namespace podvs;

namespace {

oracle::Img img_of(const Grid<double>& k) { return to_img(k); }

oracle::Img rect(const oracle::Img& a) {
  oracle::Img o = a;
  for (auto& v : o.v) v = std::max(v, 0.0);
  return o;
}

// Single-level grouping for one orientation, written with loops only.
oracle::Img grouping_oracle(const oracle::Img& in, const KernelBanks& b, int o, double w_p, bool replicate) {
  const auto e = oracle::correlate(in, img_of(b.edge.even[o]), replicate);
  const auto d = oracle::correlate(in, img_of(b.edge.odd[o]), replicate);
  const auto cs = oracle::correlate(in, img_of(b.cs.on), replicate);
  oracle::Img on(in.w, in.h), off(in.w, in.h);
  for (std::size_t i = 0; i < cs.v.size(); ++i) {
    on.v[i] = std::max(cs.v[i], 0.0);
    off.v[i] = std::max(-cs.v[i], 0.0);
  }
  const auto vl = img_of(b.vm.left[o]);
  const auto vr = img_of(b.vm.right[o]);
  const auto onl = oracle::correlate(on, vl, replicate), onr = oracle::correlate(on, vr, replicate);
  const auto offl = oracle::correlate(off, vl, replicate), offr = oracle::correlate(off, vr, replicate);
  oracle::Img li(in.w, in.h), ri(in.w, in.h);
  for (std::size_t i = 0; i < in.v.size(); ++i) {
    const double c = std::sqrt(e.v[i] * e.v[i] + d.v[i] * d.v[i]);
    const double bl = std::max(c * onl.v[i], 0.0) + std::max(c * offl.v[i], 0.0);
    const double br = std::max(c * onr.v[i], 0.0) + std::max(c * offr.v[i], 0.0);
    if (bl >= br) li.v[i] = bl - w_p * br;
    else ri.v[i] = br - w_p * bl;
  }
  const auto gl = oracle::convolve(li, vl, replicate);
  const auto gr = oracle::convolve(ri, vr, replicate);
  oracle::Img out(in.w, in.h);
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] = gl.v[i] + gr.v[i];
  return out;
}

}  // namespace

TEST_CASE("single-level grouping matches the loop oracle") {
  const auto banks = make_kernel_banks(5);
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> size(6, 18);
  for (int t = 0; t < 100; ++t) {
    const auto in = oracle::random_img(rng, size(rng), size(rng), 0.0, 255.0);
    const int o = t % kOrientations;
    const bool replicate = t % 3 != 0;
    const double w_p = t % 2 ? 1.0 : 0.5;
    GroupingOptions opt;
    opt.depth = 1;
    opt.w_p = w_p;
    opt.border = replicate ? BorderMode::Replicate : BorderMode::Zero;
    opt.orientations = OrientationSet::only(o);
    const auto got = channel_grouping(to_map(in), banks, opt);
    REQUIRE(got.depth() == 1);
    const auto want = rect(grouping_oracle(in, banks, o, w_p, replicate));
    CHECK(max_abs_diff(got.levels[0], want) <= 1e-9 * (1.0 + to_map(want).abs().maxCoeff()));
  }
}

TEST_CASE("cross-scale sum") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 100; ++t) {
    std::vector<oracle::Img> lv{oracle::random_img(rng, 20, 15), oracle::random_img(rng, 14, 11),
                                oracle::random_img(rng, 10, 8)};
    std::vector<FieldMap> maps;
    for (const auto& l : lv) maps.push_back(to_map(l));
    const auto got = von_mises_sum(maps, AddressMode::Exact);
    REQUIRE(got.size() == 3);
    for (int l = 0; l < 3; ++l) {
      oracle::Img want = lv[l];
      for (int k = l + 1; k < 3; ++k) {
        const double w = std::ldexp(1.0, l - k);
        for (int y = 0; y < want.h; ++y)
          for (int x = 0; x < want.w; ++x)
            want.at(x, y) += w * lv[k].at(x * lv[k].w / want.w, y * lv[k].h / want.h);
      }
      CHECK(max_abs_diff(got[l], want) <= 1e-12);
    }
  }
}

TEST_CASE("cross-scale sum skips unused maps") {
  std::vector<FieldMap> maps{FieldMap{}, FieldMap::Ones(2, 2)};
  const auto got = von_mises_sum(maps, AddressMode::Exact);
  CHECK(got[0].size() == 0);
  CHECK((got[1] == 1.0).all());
}

TEST_CASE("masks partition the pixels and favour the left on ties") {
  std::mt19937_64 rng(8);
  BorderOwnership bo;
  for (int o = 0; o < kOrientations; ++o) {
    bo.left[o] = random_map(rng, 6, 5).round();
    bo.right[o] = random_map(rng, 6, 5).round();
  }
  const auto m = bo_masks(bo);
  for (int o = 0; o < kOrientations; ++o) {
    CHECK(((m.left[o] + m.right[o]) == 1).all());
    for (Eigen::Index i = 0; i < bo.left[o].size(); ++i)
      if (bo.left[o].data()[i] == bo.right[o].data()[i]) CHECK(m.left[o].data()[i] == 1);
  }
}

TEST_CASE("border ownership components are non-negative") {
  const auto banks = make_kernel_banks(5);
  std::mt19937_64 rng(9);
  const FieldMap in = random_map(rng, 16, 12, 0, 255);
  const auto edges = complex_edges(in, banks.edge);
  const auto vm = von_mises_filter(center_surround(in, banks.cs), banks.vm);
  const auto bo = border_ownership(edges, vm);
  for (int o = 0; o < kOrientations; ++o) {
    CHECK(edges[o].minCoeff() >= 0.0);
    CHECK(bo.light_left[o].minCoeff() >= 0.0);
    CHECK(bo.dark_right[o].minCoeff() >= 0.0);
    CHECK((bo.left[o] - bo.light_left[o] - bo.dark_left[o]).abs().maxCoeff() <= 1e-12 * (1.0 + bo.left[o].maxCoeff()));
  }
}

TEST_CASE("uniform input has no grouping activity") {
  const auto banks = make_kernel_banks(5);
  for (auto mode : {ResolutionMode::Hw112, ResolutionMode::Hw80}) {
    const auto d = resolution_of(mode);
    const auto opt = grouping_options(default_config(mode));
    const auto g = channel_grouping(FieldMap::Constant(d.height, d.width, 77.0), banks, opt);
    CHECK(g.depth() == 3);
    for (const auto& l : g.levels) CHECK(l.abs().maxCoeff() == 0.0);
  }
}

TEST_CASE("grouping output is rectified") {
  const auto banks = make_kernel_banks(5);
  std::mt19937_64 rng(10);
  const auto opt = grouping_options(default_config(ResolutionMode::Hw80));
  const auto g = channel_grouping(random_map(rng, 80, 60, 0, 255), banks, opt);
  for (const auto& l : g.levels) CHECK(l.minCoeff() >= 0.0);
}

TEST_CASE("a lone square draws activity to itself") {
  const auto banks = make_kernel_banks(5);
  FieldMap in = FieldMap::Zero(60, 80);
  in.block(25, 20, 10, 10) = 255.0;
  const auto g = channel_grouping(in, banks, grouping_options(default_config(ResolutionMode::Hw80)));
  Eigen::Index y, x;
  g.levels[0].maxCoeff(&y, &x);
  CHECK(x >= 15);
  CHECK(x <= 35);
  CHECK(y >= 20);
  CHECK(y <= 40);
}

TEST_CASE("options follow the configuration") {
  auto cfg = default_config(ResolutionMode::Hw112);
  cfg.inhibition_weight = 0.25;
  cfg.border = BorderMode::Zero;
  const auto o = grouping_options(cfg, OrientationSet::only(3));
  CHECK(o.hw_pyramid);
  CHECK(o.address == AddressMode::Shift);
  CHECK(o.w_p == 0.25);
  CHECK(o.border == BorderMode::Zero);
  CHECK_FALSE(o.orientations.use[0]);
  CHECK(o.orientations.use[3]);
  const auto r = grouping_options(default_config());
  CHECK_FALSE(r.hw_pyramid);
  CHECK(r.depth == 10);
  CHECK(r.address == AddressMode::Exact);
}
