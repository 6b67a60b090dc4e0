#include <doctest.h>

#include "podvs/io.hpp"
#include "podvs/synth.hpp"
#include "test_util.hpp"

#include <unistd.h>

using namespace podvs;

namespace {

// Fresh scratch directory per test case.
struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("podvs_io_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("PPM round trip") {
  TempDir t;
  std::mt19937_64 rng(67);
  const auto f = random_frame(rng, {13, 7});
  write_ppm(t.path / "a.ppm", f);
  CHECK(read_pnm(t.path / "a.ppm") == f);
}

TEST_CASE("PNM parsing") {
  const std::string gray = std::string("P5\n# comment\n2 1\n255\n") + '\x10' + '\x20';
  const auto g = parse_pnm(gray);
  CHECK(g.dims() == Dimensions{2, 1});
  CHECK(g.r()(0, 1) == 0x20);
  CHECK(g.b()(0, 0) == 0x10);

  CHECK_THROWS_AS(parse_pnm("P3\n1 1\n255\n0 0 0\n"), FormatError);
  CHECK_THROWS_AS(parse_pnm("P6\n2 2\n255\n\x01"), FormatError);
  CHECK_THROWS_WITH_AS(parse_pnm("P5\n1 1\n65535\n\x01\x02"), doctest::Contains("unsupported depth"), FormatError);
  CHECK_THROWS_AS(parse_pnm("P6\n0 2\n255\n"), FormatError);
  CHECK_THROWS_AS(parse_pnm("P6\nx 2\n255\n"), FormatError);
  CHECK_THROWS(read_pnm("/nonexistent/frame.ppm"));
}

TEST_CASE("16-bit PGM maps") {
  TempDir t;
  FieldMap m(2, 3);
  m << 0.0, 0.5, 1.0, -1.0, 2.0, 0.25;
  write_pgm16(t.path / "m.pgm", m);
  const auto bytes = read_file(t.path / "m.pgm");
  CHECK(bytes.starts_with("P5\n3 2\n65535\n"));
  const FieldMap back = read_pgm(t.path / "m.pgm");
  CHECK(back(0, 0) == 0.0);
  CHECK(back(0, 2) == 1.0);
  CHECK(back(1, 0) == 0.0);
  CHECK(back(1, 1) == 1.0);
  CHECK(std::abs(back(0, 1) - 0.5) <= 0.5 / 65535);
}

TEST_CASE("PSAL keeps floats exactly") {
  TempDir t;
  std::mt19937_64 rng(71);
  const FieldMap m = random_map(rng, 9, 4).cast<float>().cast<double>();
  write_psal(t.path / "m.psal", m, 42);
  const auto back = read_psal(t.path / "m.psal");
  CHECK(back.frame_index == 42);
  CHECK((back.map == m).all());
  const auto bytes = read_file(t.path / "m.psal");
  CHECK(bytes.size() == 16 + 4 * 36);
  CHECK(bytes.substr(0, 4) == "PSAL");
  CHECK(static_cast<unsigned char>(bytes[4]) == 9);  // little-endian width

  write_file(t.path / "bad.psal", bytes.substr(0, 30));
  CHECK_THROWS_AS(read_psal(t.path / "bad.psal"), FormatError);
  write_file(t.path / "junk.psal", "hello world, not a map");
  CHECK_THROWS_AS(read_psal(t.path / "junk.psal"), FormatError);
}

TEST_CASE("frame directories sort numerically") {
  TempDir t;
  const auto v = synth_moving_bar({80, 60}, 12);
  for (std::size_t i = 0; i < v.frames.size(); ++i) write_ppm(t.path / (std::to_string(i) + ".ppm"), v.frames[i]);
  write_file(t.path / "notes.txt", "ignored");
  const auto frames = read_frames(t.path);
  REQUIRE(frames.size() == 12);
  for (std::size_t i = 0; i < frames.size(); ++i) CHECK(frames[i] == v.frames[i]);

  write_file(t.path / "list.txt", "# two frames\n3.ppm\n\n10.ppm\n");
  const auto listed = read_frames(t.path / "list.txt");
  REQUIRE(listed.size() == 2);
  CHECK(listed[1] == v.frames[10]);
}

TEST_CASE("frame directory errors") {
  TempDir t;
  CHECK_THROWS_WITH(read_frames(t.path), doctest::Contains("no frames"));
  CHECK_THROWS(read_frames(t.path / "missing"));
  write_ppm(t.path / "0.ppm", FrameRGB::filled({4, 4}, 1, 2, 3));
  write_ppm(t.path / "1.ppm", FrameRGB::filled({5, 4}, 1, 2, 3));
  CHECK_THROWS_AS(read_frames(t.path), DimensionError);
}

TEST_CASE("map archives") {
  TempDir t;
  std::mt19937_64 rng(73);
  std::vector<FieldMap> maps;
  for (int i = 0; i < 3; ++i) maps.push_back(random_map(rng, 8, 6).cast<float>().cast<double>());
  ArchiveMeta meta;
  meta.mode = "hw80";
  write_maps(maps, t.path / "out", meta, {true, true});
  CHECK(fs::exists(t.path / "out" / "000002.pgm"));
  CHECK(fs::exists(t.path / "out" / "000000.psal"));
  const auto a = read_archive(t.path / "out");
  CHECK(a.meta.frames == 3);
  CHECK(a.meta.resolution == Dimensions{8, 6});
  CHECK(a.meta.mode == "hw80");
  CHECK(a.meta.engine_version == kEngineVersion);
  REQUIRE(a.maps.size() == 3);
  CHECK((a.maps[1] == maps[1]).all());

  write_maps(maps, t.path / "pgm", meta);
  const auto p = read_archive(t.path / "pgm");
  CHECK_FALSE(p.meta.has_raw);
  CHECK((p.maps[2] - maps[2]).abs().maxCoeff() <= 0.5 / 65535 + 1e-12);

  CHECK_THROWS_AS(write_maps(maps, t.path / "none", meta, {false, false}), ConfigError);
  write_file(t.path / "pgm" / "archive.json", "{\"width\": 8}");
  CHECK_THROWS_AS(read_archive(t.path / "pgm"), FormatError);
}

TEST_CASE("fixation CSV") {
  const std::vector<FixationRecord> recs{{"clip", 0, 1, 10, 20}, {"other", 5, 2, 3, 4}};
  const auto text = format_fixations_csv(recs);
  CHECK(parse_fixations_csv(text) == recs);
  CHECK(parse_fixations_csv("video,frame,subject,x,y\r\nclip,1,0,2,3\r\n").size() == 1);
  CHECK_THROWS_AS(parse_fixations_csv(""), FormatError);
  CHECK_THROWS_AS(parse_fixations_csv("a,b,c\n"), FormatError);
  CHECK_THROWS_WITH_AS(parse_fixations_csv("video,frame,subject,x,y\nclip,1,0,2\n"), doctest::Contains("line 2"),
                       FormatError);
  CHECK_THROWS_AS(parse_fixations_csv("video,frame,subject,x,y\nclip,1,0,2,3.5\n"), FormatError);
}
