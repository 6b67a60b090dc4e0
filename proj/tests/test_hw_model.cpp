#include <doctest.h>

#include "podvs/hw_model.hpp"
#include "podvs/metrics.hpp"
#include "podvs/synth.hpp"
#include "test_util.hpp"

#include <json.hpp>

using namespace podvs;

namespace {

bool within(double got, double want, double rel) { return std::abs(got - want) <= rel * want; }

}  // namespace

TEST_CASE("stage names") {
  CHECK(stage_name(HwStage::P1) == "P1 ingest");
  CHECK(stage_name(HwStage::P7) == "P7 grouping");
}

TEST_CASE("exact ledger entries") {
  // P2 is bounded by the largest reduced level; for a 112x84 input that is 80x60.
  const auto p112 = cycle_model(ResolutionMode::Hw112, 1.0);
  CHECK(p112.stage(HwStage::P2).cycles == 80 * 60 * 5);
  CHECK(p112.stage(HwStage::P2).cycles == 24000);
  CHECK(cycle_model(ResolutionMode::Hw80, 1.0).stage(HwStage::P2).cycles == 56 * 44 * 5);
  CHECK(HwTiming{}.fsm_cycles_per_pixel() == 25 + 75 + 14);
  CHECK(mac_cycles(25) == 75);
  CHECK(p112.stage(HwStage::P5).note.find("no extra") != std::string::npos);
}

TEST_CASE("stage totals at 112x84") {
  const auto p = cycle_model(ResolutionMode::Hw112, 1.0);
  CHECK(within(p.stage(HwStage::P3).cycles, 1.9e6, 0.05));
  CHECK(within(p.stage(HwStage::P4).cycles, 1.9e6, 0.05));
  CHECK(within(p.stage(HwStage::P5).cycles, 241e3, 0.05));
  CHECK(within(p.stage(HwStage::P6).cycles, 56e3, 0.05));
  CHECK(within(p.stage(HwStage::P7).cycles, 1.9e6, 0.05));
  long long sum = 0;
  for (const auto& s : p.stages) sum += s.cycles;
  CHECK(p.total_cycles() == sum);
  CHECK(p.critical_stage_cycles() == p.stage(HwStage::P3).cycles);
}

TEST_CASE("frame rates") {
  CHECK(within(cycle_model(ResolutionMode::Hw112, 1.0).frame_rate_hz(), 2.079, 0.05));
  CHECK(within(cycle_model(ResolutionMode::Hw112, 9.0).frame_rate_hz(), 18.71, 0.05));
  CHECK(within(cycle_model(ResolutionMode::Hw80, 2.0).frame_rate_hz(), 5.19, 0.05));
  CHECK(within(cycle_model(ResolutionMode::Hw80, 9.0).frame_rate_hz(), 23.35, 0.05));
  CHECK(cycle_model(ResolutionMode::Hw112).parallel_channels == 1.0);
  CHECK(cycle_model(ResolutionMode::Hw80).parallel_channels == 2.0);
  const auto p = cycle_model(ResolutionMode::Hw80, 2.0);
  CHECK(p.passes() == 4.5);
  CHECK(p.frame_rate_hz() == doctest::Approx(p.clock_hz / p.frame_interval_cycles()));
  CHECK_THROWS_AS(cycle_model(ResolutionMode::Reference640), ConfigError);
  CHECK_THROWS_AS(cycle_model(ResolutionMode::Hw112, 0.0), ConfigError);
}

TEST_CASE("the ledger is deterministic") {
  const auto a = cycle_model(ResolutionMode::Hw112, 1.0);
  const auto b = cycle_model(ResolutionMode::Hw112, 1.0);
  for (int s = 0; s < kHwStageCount; ++s) {
    CHECK(a.stages[s].cycles == b.stages[s].cycles);
    CHECK(a.stages[s].bram_bits == b.stages[s].bram_bits);
  }
}

TEST_CASE("block RAM per stage at 112x84") {
  const auto r = resource_report(ResolutionMode::Hw112, 1.0);
  CHECK(r.per_channel_bits[0] == 112 * 84 * 8);
  CHECK(within(r.per_channel_bits[0] / 1000.0, 75.2, 0.01));  // kilobits
  CHECK(within(r.per_channel_bits[1] / 8000.0, 7.2, 0.01));   // kilobytes from here on
  CHECK(within(r.per_channel_bits[2] / 8000.0, 100.3, 0.01));
  CHECK(within(r.per_channel_bits[3] / 8000.0, 266.7, 0.01));
  CHECK(r.per_channel_bits[4] == 0);
  CHECK(within(r.per_channel_bits[5] / 8000.0, 133.3, 0.01));
  CHECK(within(r.per_channel_bits[6] / 8000.0, 66.6, 0.01));

  const auto nine = resource_report(ResolutionMode::Hw112, 9.0);
  CHECK(nine.total_bits() == doctest::Approx(9.0 * r.total_bits()));
  CHECK(resource_report(ResolutionMode::Hw80, 0.0).total_bits() == 0.0);
  CHECK(resource_report(ResolutionMode::Hw80, 4.5).total_bits() ==
        doctest::Approx(4.5 * resource_report(ResolutionMode::Hw80, 1.0).total_bits()));
  CHECK(cycle_model(ResolutionMode::Hw112, 1.0).bram_bits() == static_cast<long long>(r.total_bits()));
}

TEST_CASE("profile reports") {
  const auto p = cycle_model(ResolutionMode::Hw112, 1.0);
  const auto text = profile_text(p);
  for (int s = 0; s < kHwStageCount; ++s)
    CHECK(text.find(std::string(stage_name(static_cast<HwStage>(s)))) != std::string::npos);
  CHECK(text.find("24000") != std::string::npos);

  const auto j = nlohmann::json::parse(profile_json(p));
  CHECK(j["mode"] == "hw112");
  CHECK(j["stages"].size() == 7);
  CHECK(j["stages"][1]["cycles"] == 24000);
  CHECK(j["total_cycles"] == p.total_cycles());
  CHECK(j["frame_rate_hz"].get<double>() == doctest::Approx(p.frame_rate_hz()));
}

TEST_CASE("hardware grouping rejects bad inputs") {
  const auto banks = make_kernel_banks(5);
  CHECK_THROWS_AS(hw_channel_grouping(FieldMap::Zero(60, 80), false, banks, default_config(), OrientationSet::all()),
                  ConfigError);
  CHECK_THROWS_AS(hw_channel_grouping(FieldMap::Zero(84, 112), false, banks, default_config(ResolutionMode::Hw80),
                                      OrientationSet::all()),
                  DimensionError);
  CHECK_THROWS_AS(HwPipeline{default_config()}, ConfigError);
  CHECK_THROWS(run_hw_pipeline({}, default_config(ResolutionMode::Hw80)));
}

TEST_CASE("hardware grouping of a blank input is blank") {
  const auto banks = make_kernel_banks(5);
  const auto g = hw_channel_grouping(FieldMap::Zero(60, 80), true, banks, default_config(ResolutionMode::Hw80),
                                     OrientationSet::all());
  REQUIRE(g.depth() == 3);
  for (const auto& l : g.levels) CHECK(l.abs().maxCoeff() == 0.0);
}

TEST_CASE("hardware maps track the reference") {
  for (auto mode : {ResolutionMode::Hw80, ResolutionMode::Hw112}) {
    const auto cfg = default_config(mode);
    const auto v = synth_static_square(cfg.resolution(), 3);
    const auto hw = run_hw_pipeline(v.frames, cfg);
    const auto ref = run_sequence(v.frames, cfg);
    CHECK(hw.profile.frames == 3);
    for (std::size_t i = 0; i < v.frames.size(); ++i) {
      CHECK(hw.maps[i].minCoeff() >= 0.0);
      CHECK(hw.maps[i].maxCoeff() <= 1.0);
      CHECK(pcc(hw.maps[i], ref.maps[i]) >= 0.8);
    }
  }
}

TEST_CASE("more fraction bits never hurt") {
  for (auto mode : {ResolutionMode::Hw80, ResolutionMode::Hw112}) {
    auto cfg = default_config(mode);
    const auto suite = synth_suite(cfg.resolution());
    std::vector<std::vector<FieldMap>> refs;
    for (const auto& v : suite) refs.push_back(run_sequence(v.frames, cfg).maps);
    double prev = -2.0;
    for (int frac = 2; frac <= 16; ++frac) {
      cfg.fixed_fraction_bits = frac;
      cfg.fixed_total_bits = frac + 10;
      double sum = 0.0;
      int n = 0;
      for (std::size_t i = 0; i < suite.size(); ++i) {
        const auto hw = run_hw_pipeline(suite[i].frames, cfg);
        for (std::size_t f = 0; f < hw.maps.size(); ++f, ++n) sum += pcc(hw.maps[f], refs[i][f]);
      }
      CAPTURE(mode_name(mode));
      CAPTURE(frac);
      CHECK(sum / n >= prev);
      prev = sum / n;
    }
  }
}
