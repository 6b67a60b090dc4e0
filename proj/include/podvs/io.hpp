#pragma once

#include "podvs/core.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace podvs {

inline constexpr std::string_view kEngineVersion = "0.1.0";

namespace fs = std::filesystem;

/// Binary P6 (RGB) or P5 (gray, replicated to RGB), maxval <= 255.
FrameRGB read_pnm(const fs::path& path);
FrameRGB parse_pnm(std::string_view bytes);
void write_ppm(const fs::path& path, const FrameRGB& frame);

/// 16-bit P5, value = round(v * 65535) with v clamped to [0, 1].
void write_pgm16(const fs::path& path, const FieldMap& map);
/// Any binary P5; values scaled back to [0, 1] by maxval.
FieldMap read_pgm(const fs::path& path);

/// "PSAL", width, height, frame index (uint32 LE), then float32 LE row-major.
void write_psal(const fs::path& path, const FieldMap& map, std::uint32_t frame_index);
struct PsalFrame {
  FieldMap map;
  std::uint32_t frame_index = 0;
};
PsalFrame read_psal(const fs::path& path);

/// A directory of .ppm/.pgm files ordered by numeric file name, or a text file
/// listing one image path per line (relative to the list file).
std::vector<FrameRGB> read_frames(const fs::path& dir_or_list);

struct ArchiveMeta {
  Dimensions resolution;
  double frame_rate_hz = 24.0;
  std::string mode;
  std::string engine_version{kEngineVersion};
  int frames = 0;
  bool has_pgm = true;
  bool has_raw = false;
};

struct MapArchive {
  ArchiveMeta meta;
  std::vector<FieldMap> maps;
};

struct MapFormats {
  bool pgm = true;
  bool raw = false;
};

/// Writes NNNNNN.pgm and/or NNNNNN.psal per frame plus archive.json.
void write_maps(const std::vector<FieldMap>& maps, const fs::path& dir, ArchiveMeta meta, MapFormats formats = {});
/// Prefers the raw planes when present.
MapArchive read_archive(const fs::path& dir);

/// CSV with header `video,frame,subject,x,y`.
std::vector<FixationRecord> parse_fixations_csv(std::string_view text);
std::vector<FixationRecord> read_fixations_csv(const fs::path& path);
std::string format_fixations_csv(const std::vector<FixationRecord>& records);

std::string read_file(const fs::path& path);
void write_file(const fs::path& path, std::string_view bytes);

}  // namespace podvs
