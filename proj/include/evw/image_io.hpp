#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "evw/grid.hpp"

namespace evw {

namespace detail {

/// Locale-independent round-trip formatting for doubles (17 significant
/// digits).
inline std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

inline double parse_double(const std::string& s) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  while (b != e && (*b == ' ' || *b == '\t')) ++b;
  const auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc{}) throw IoError("malformed number: '" + s + "'");
  return v;
}

inline long parse_long(const std::string& s) {
  long v = 0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  while (b != e && (*b == ' ' || *b == '\t')) ++b;
  const auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc{}) throw IoError("malformed integer: '" + s + "'");
  return v;
}

// PNM-style token reader: skips whitespace and '#' comments.
inline std::string pnm_token(std::istream& in) {
  std::string tok;
  int ch = in.get();
  while (ch != EOF) {
    if (ch == '#') {
      while (ch != EOF && ch != '\n') ch = in.get();
    } else if (std::isspace(ch)) {
      ch = in.get();
    } else {
      break;
    }
  }
  while (ch != EOF && !std::isspace(ch)) {
    tok.push_back(static_cast<char>(ch));
    ch = in.get();
  }
  return tok;
}

}  // namespace detail

/// 32-bit grayscale PFM ("Pf"), little-endian, rows stored bottom-up.
inline void write_pfm(const std::filesystem::path& path, const ImageGrid& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << "Pf\n" << img.width << " " << img.height << "\n-1.0\n";
  std::vector<float> row(static_cast<std::size_t>(img.width));
  for (int r = img.height - 1; r >= 0; --r) {
    for (int c = 0; c < img.width; ++c) row[c] = static_cast<float>(img(r, c));
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(float)));
  }
  if (!out) throw IoError("write failed: " + path.string());
}

inline ImageGrid read_pfm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());
  const std::string magic = detail::pnm_token(in);
  if (magic != "Pf") {
    if (magic == "PF") throw IoError("color PFM not supported: " + path.string());
    throw IoError("not a PFM file: " + path.string());
  }
  const int w = static_cast<int>(detail::parse_long(detail::pnm_token(in)));
  const int h = static_cast<int>(detail::parse_long(detail::pnm_token(in)));
  const double scale = detail::parse_double(detail::pnm_token(in));
  if (w <= 0 || h <= 0) throw IoError("bad PFM dimensions: " + path.string());

  ImageGrid img(h, w);
  std::vector<unsigned char> row(static_cast<std::size_t>(w) * 4);
  for (int r = h - 1; r >= 0; --r) {
    in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row.size()));
    if (!in) throw IoError("truncated PFM data: " + path.string());
    for (int c = 0; c < w; ++c) {
      unsigned char b[4];
      std::memcpy(b, row.data() + static_cast<std::size_t>(c) * 4, 4);
      if (scale > 0) std::swap(b[0], b[3]), std::swap(b[1], b[2]);  // big-endian file
      float f = 0.0f;
      std::memcpy(&f, b, 4);
      img(r, c) = static_cast<double>(f);
    }
  }
  return img;
}

/// Binary PGM (P5). maxval <= 255 writes one byte per pixel, larger maxval
/// writes big-endian 16-bit words.
inline void write_pgm(const std::filesystem::path& path, const std::vector<std::uint16_t>& pixels,
                      int height, int width, unsigned maxval) {
  if (maxval == 0 || maxval > 65535) throw InvalidInputError("write_pgm: bad maxval");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << "P5\n" << width << " " << height << "\n" << maxval << "\n";
  if (maxval <= 255) {
    std::vector<unsigned char> buf(pixels.size());
    for (std::size_t i = 0; i < pixels.size(); ++i) buf[i] = static_cast<unsigned char>(pixels[i]);
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
  } else {
    std::vector<unsigned char> buf(pixels.size() * 2);
    for (std::size_t i = 0; i < pixels.size(); ++i) {
      buf[2 * i] = static_cast<unsigned char>(pixels[i] >> 8);
      buf[2 * i + 1] = static_cast<unsigned char>(pixels[i] & 0xff);
    }
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
  }
  if (!out) throw IoError("write failed: " + path.string());
}

struct PgmImage {
  int height = 0;
  int width = 0;
  unsigned maxval = 0;
  std::vector<std::uint16_t> pixels;
};

inline PgmImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());
  if (detail::pnm_token(in) != "P5") throw IoError("not a binary PGM: " + path.string());
  PgmImage img;
  img.width = static_cast<int>(detail::parse_long(detail::pnm_token(in)));
  img.height = static_cast<int>(detail::parse_long(detail::pnm_token(in)));
  img.maxval = static_cast<unsigned>(detail::parse_long(detail::pnm_token(in)));
  if (img.width <= 0 || img.height <= 0 || img.maxval == 0 || img.maxval > 65535)
    throw IoError("bad PGM header: " + path.string());
  const std::size_t count = static_cast<std::size_t>(img.width) * img.height;
  const int bytes = img.maxval <= 255 ? 1 : 2;
  std::vector<unsigned char> buf(count * bytes);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!in) throw IoError("truncated PGM data: " + path.string());
  img.pixels.resize(count);
  for (std::size_t i = 0; i < count; ++i)
    img.pixels[i] = bytes == 1 ? buf[i]
                               : static_cast<std::uint16_t>((buf[2 * i] << 8) | buf[2 * i + 1]);
  return img;
}

/// Reads PFM or PGM by magic number into a real-valued grid; PGM pixel values
/// are kept as-is (not normalized).
inline ImageGrid read_image(const std::filesystem::path& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw IoError("cannot open: " + path.string());
  char magic[2] = {0, 0};
  probe.read(magic, 2);
  probe.close();
  if (magic[0] == 'P' && magic[1] == 'f') return read_pfm(path);
  if (magic[0] == 'P' && magic[1] == '5') {
    const PgmImage pgm = read_pgm(path);
    ImageGrid img(pgm.height, pgm.width);
    for (std::size_t i = 0; i < pgm.pixels.size(); ++i)
      img.data[i] = static_cast<double>(pgm.pixels[i]);
    return img;
  }
  throw IoError("unsupported image format (need PFM 'Pf' or PGM 'P5'): " + path.string());
}

/// Line-oriented `key=value` manifest, written in the order given.
inline void write_manifest(const std::filesystem::path& path,
                           const std::vector<std::pair<std::string, std::string>>& entries) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  for (const auto& [k, v] : entries) out << k << "=" << v << "\n";
  if (!out) throw IoError("write failed: " + path.string());
}

inline std::map<std::string, std::string> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw IoError("malformed manifest line: '" + line + "'");
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

}  // namespace evw
