#include "podvs/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace podvs {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed: " + path.string());
}

namespace {

struct PnmHeader {
  char kind = 0;  // '5' or '6'
  int width = 0, height = 0, maxval = 0;
  std::size_t offset = 0;
};

PnmHeader parse_header(std::string_view b) {
  if (b.size() < 2 || b[0] != 'P' || (b[1] != '5' && b[1] != '6'))
    throw FormatError("not a binary PGM/PPM (expected P5 or P6)");
  PnmHeader h;
  h.kind = b[1];
  std::size_t i = 2;
  auto next_int = [&]() {
    while (i < b.size()) {
      if (b[i] == '#') {
        while (i < b.size() && b[i] != '\n') ++i;
      } else if (std::isspace(static_cast<unsigned char>(b[i]))) {
        ++i;
      } else {
        break;
      }
    }
    if (i >= b.size() || !std::isdigit(static_cast<unsigned char>(b[i]))) throw FormatError("malformed PNM header");
    long v = 0;
    while (i < b.size() && std::isdigit(static_cast<unsigned char>(b[i]))) {
      v = v * 10 + (b[i] - '0');
      if (v > 1'000'000) throw FormatError("malformed PNM header: value too large");
      ++i;
    }
    return static_cast<int>(v);
  };
  h.width = next_int();
  h.height = next_int();
  h.maxval = next_int();
  if (i >= b.size() || !std::isspace(static_cast<unsigned char>(b[i]))) throw FormatError("malformed PNM header");
  h.offset = i + 1;
  if (h.width <= 0 || h.height <= 0) throw FormatError("PNM image has no pixels");
  if (h.maxval <= 0 || h.maxval > 65535) throw FormatError("malformed PNM header: bad maxval");
  return h;
}

}  // namespace

FrameRGB parse_pnm(std::string_view b) {
  const PnmHeader h = parse_header(b);
  if (h.maxval > 255) throw FormatError("unsupported depth: maxval " + std::to_string(h.maxval) + " (8-bit only)");
  const int channels = h.kind == '6' ? 3 : 1;
  const std::size_t need = static_cast<std::size_t>(h.width) * h.height * channels;
  if (b.size() - h.offset < need) throw FormatError("truncated PNM pixel data");
  const auto* px = reinterpret_cast<const std::uint8_t*>(b.data() + h.offset);

  Plane8 r(h.height, h.width), g(h.height, h.width), bl(h.height, h.width);
  for (int y = 0; y < h.height; ++y)
    for (int x = 0; x < h.width; ++x) {
      const std::size_t k = (static_cast<std::size_t>(y) * h.width + x) * channels;
      r(y, x) = px[k];
      g(y, x) = px[k + (channels == 3 ? 1 : 0)];
      bl(y, x) = px[k + (channels == 3 ? 2 : 0)];
    }
  return FrameRGB(std::move(r), std::move(g), std::move(bl));
}

FrameRGB read_pnm(const fs::path& path) {
  try {
    return parse_pnm(read_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_ppm(const fs::path& path, const FrameRGB& f) {
  std::string out = "P6\n" + std::to_string(f.width()) + " " + std::to_string(f.height()) + "\n255\n";
  const std::size_t head = out.size();
  out.resize(head + static_cast<std::size_t>(f.width()) * f.height() * 3);
  std::size_t k = head;
  for (int y = 0; y < f.height(); ++y)
    for (int x = 0; x < f.width(); ++x) {
      out[k++] = static_cast<char>(f.r()(y, x));
      out[k++] = static_cast<char>(f.g()(y, x));
      out[k++] = static_cast<char>(f.b()(y, x));
    }
  write_file(path, out);
}

void write_pgm16(const fs::path& path, const FieldMap& map) {
  std::string out = "P5\n" + std::to_string(map.cols()) + " " + std::to_string(map.rows()) + "\n65535\n";
  const std::size_t head = out.size();
  out.resize(head + static_cast<std::size_t>(map.size()) * 2);
  std::size_t k = head;
  for (Eigen::Index i = 0; i < map.size(); ++i) {
    const double v = std::clamp(map.data()[i], 0.0, 1.0);
    const auto q = static_cast<std::uint16_t>(std::lround(v * 65535.0));
    out[k++] = static_cast<char>(q >> 8);  // PNM samples are big-endian
    out[k++] = static_cast<char>(q & 0xff);
  }
  write_file(path, out);
}

FieldMap read_pgm(const fs::path& path) {
  const std::string b = read_file(path);
  const PnmHeader h = parse_header(b);
  if (h.kind != '5') throw FormatError(path.string() + ": expected a P5 map");
  const int bytes = h.maxval > 255 ? 2 : 1;
  const std::size_t need = static_cast<std::size_t>(h.width) * h.height * bytes;
  if (b.size() - h.offset < need) throw FormatError(path.string() + ": truncated PGM pixel data");
  const auto* px = reinterpret_cast<const std::uint8_t*>(b.data() + h.offset);
  FieldMap m(h.height, h.width);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const unsigned v = bytes == 2 ? (px[2 * i] << 8) | px[2 * i + 1] : px[i];
    m.data()[i] = static_cast<double>(v) / h.maxval;
  }
  return m;
}

namespace {

void put_u32(std::string& s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const std::string& s, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(s[at + i])) << (8 * i);
  return v;
}

}  // namespace

void write_psal(const fs::path& path, const FieldMap& map, std::uint32_t frame_index) {
  std::string out = "PSAL";
  put_u32(out, static_cast<std::uint32_t>(map.cols()));
  put_u32(out, static_cast<std::uint32_t>(map.rows()));
  put_u32(out, frame_index);
  for (Eigen::Index i = 0; i < map.size(); ++i) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(map.data()[i])));
  write_file(path, out);
}

PsalFrame read_psal(const fs::path& path) {
  const std::string b = read_file(path);
  if (b.size() < 16 || b.compare(0, 4, "PSAL") != 0) throw FormatError(path.string() + ": not a PSAL file");
  const std::uint32_t w = get_u32(b, 4);
  const std::uint32_t h = get_u32(b, 8);
  PsalFrame f;
  f.frame_index = get_u32(b, 12);
  if (b.size() != 16 + 4ull * w * h) throw FormatError(path.string() + ": PSAL size does not match its header");
  f.map.resize(h, w);
  for (Eigen::Index i = 0; i < f.map.size(); ++i) f.map.data()[i] = std::bit_cast<float>(get_u32(b, 16 + 4 * i));
  return f;
}

namespace {

bool is_image(const fs::path& p) {
  const auto ext = p.extension().string();
  return ext == ".ppm" || ext == ".pgm";
}

// Numeric stems sort by value, everything else lexicographically after them.
bool frame_order(const fs::path& a, const fs::path& b) {
  auto key = [](const fs::path& p) {
    const std::string s = p.stem().string();
    const bool numeric = !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
    return std::make_tuple(!numeric, numeric ? std::stoull(s.substr(0, 18)) : 0ull, s);
  };
  return key(a) < key(b);
}

}  // namespace

std::vector<FrameRGB> read_frames(const fs::path& src) {
  std::vector<fs::path> files;
  if (fs::is_directory(src)) {
    for (const auto& e : fs::directory_iterator(src))
      if (e.is_regular_file() && is_image(e.path())) files.push_back(e.path());
    std::sort(files.begin(), files.end(), frame_order);
  } else if (fs::is_regular_file(src)) {
    std::istringstream lines(read_file(src));
    std::string line;
    while (std::getline(lines, line)) {
      while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      fs::path p(line);
      files.push_back(p.is_absolute() ? p : src.parent_path() / p);
    }
  } else {
    throw Error("no such file or directory: " + src.string());
  }
  if (files.empty()) throw Error("no frames found in " + src.string());

  std::vector<FrameRGB> frames;
  frames.reserve(files.size());
  for (const auto& f : files) {
    frames.push_back(read_pnm(f));
    if (frames.back().dims() != frames.front().dims())
      throw DimensionError("mixed frame sizes: " + f.filename().string() + " is " + to_string(frames.back().dims()) +
                           ", first frame is " + to_string(frames.front().dims()));
  }
  return frames;
}

namespace {

std::string frame_stem(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%06zu", i);
  return buf;
}

}  // namespace

void write_maps(const std::vector<FieldMap>& maps, const fs::path& dir, ArchiveMeta meta, MapFormats formats) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());
  if (!formats.pgm && !formats.raw) throw ConfigError("formats: at least one output format is required");
  for (std::size_t i = 0; i < maps.size(); ++i) {
    if (formats.pgm) write_pgm16(dir / (frame_stem(i) + ".pgm"), maps[i]);
    if (formats.raw) write_psal(dir / (frame_stem(i) + ".psal"), maps[i], static_cast<std::uint32_t>(i));
  }
  if (!maps.empty()) meta.resolution = dims_of(maps.front());
  meta.frames = static_cast<int>(maps.size());
  meta.has_pgm = formats.pgm;
  meta.has_raw = formats.raw;

  nlohmann::json j;
  j["width"] = meta.resolution.width;
  j["height"] = meta.resolution.height;
  j["frame_rate_hz"] = meta.frame_rate_hz;
  j["mode"] = meta.mode;
  j["engine_version"] = meta.engine_version;
  j["frames"] = meta.frames;
  j["pgm"] = meta.has_pgm;
  j["raw"] = meta.has_raw;
  write_file(dir / "archive.json", j.dump(2) + "\n");
}

MapArchive read_archive(const fs::path& dir) {
  MapArchive a;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(dir / "archive.json"));
    a.meta.resolution = {j.at("width").get<int>(), j.at("height").get<int>()};
    a.meta.frame_rate_hz = j.at("frame_rate_hz").get<double>();
    a.meta.mode = j.at("mode").get<std::string>();
    a.meta.engine_version = j.at("engine_version").get<std::string>();
    a.meta.frames = j.at("frames").get<int>();
    a.meta.has_pgm = j.value("pgm", true);
    a.meta.has_raw = j.value("raw", false);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(dir.string() + "/archive.json: " + e.what());
  }
  for (int i = 0; i < a.meta.frames; ++i) {
    const auto stem = frame_stem(static_cast<std::size_t>(i));
    FieldMap m = a.meta.has_raw ? read_psal(dir / (stem + ".psal")).map : read_pgm(dir / (stem + ".pgm"));
    if (dims_of(m) != a.meta.resolution)
      throw FormatError(dir.string() + ": frame " + stem + " does not match the archive resolution");
    a.maps.push_back(std::move(m));
  }
  return a;
}

std::vector<FixationRecord> parse_fixations_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<FixationRecord> out;
  int lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      if (line != "video,frame,subject,x,y") throw FormatError("fixation CSV: expected header 'video,frame,subject,x,y'");
      header = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 5) throw FormatError("fixation CSV line " + std::to_string(lineno) + ": expected 5 fields");
    try {
      std::size_t used = 0;
      auto num = [&](const std::string& s) {
        const int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
      };
      out.push_back({f[0], num(f[1]), num(f[2]), num(f[3]), num(f[4])});
    } catch (const std::logic_error&) {
      throw FormatError("fixation CSV line " + std::to_string(lineno) + ": non-integer field");
    }
  }
  if (!header) throw FormatError("fixation CSV: missing header");
  return out;
}

std::vector<FixationRecord> read_fixations_csv(const fs::path& path) { return parse_fixations_csv(read_file(path)); }

std::string format_fixations_csv(const std::vector<FixationRecord>& records) {
  std::ostringstream os;
  os << "video,frame,subject,x,y\n";
  for (const auto& r : records) os << r.video << ',' << r.frame << ',' << r.subject << ',' << r.x << ',' << r.y << '\n';
  return os.str();
}

}  // namespace podvs
