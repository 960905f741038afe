// Copyright 2026 The evpose Authors
// SPDX-License-Identifier: Apache-2.0

#include "evpose/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "evpose/error.hpp"

namespace evpose {
namespace {

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Cursor over PGM header tokens, skipping whitespace and '#' comments.
struct PgmCursor {
  std::span<const std::uint8_t> data;
  std::size_t pos = 0;

  void skip_space() {
    while (pos < data.size()) {
      if (data[pos] == '#') {
        while (pos < data.size() && data[pos] != '\n') ++pos;
      } else if (std::isspace(data[pos])) {
        ++pos;
      } else {
        break;
      }
    }
  }

  long number() {
    skip_space();
    long v = 0;
    std::size_t start = pos;
    while (pos < data.size() && std::isdigit(data[pos])) v = v * 10 + (data[pos++] - '0');
    if (pos == start) throw Error(Errc::Parse, "malformed PGM header");
    return v;
  }
};

std::uint64_t trailing_number(const std::string& stem) {
  std::size_t end = stem.size();
  std::size_t start = end;
  while (start > 0 && std::isdigit(static_cast<unsigned char>(stem[start - 1]))) --start;
  if (start == end) return 0;
  return std::stoull(stem.substr(start, std::min<std::size_t>(end - start, 18)));
}

}  // namespace

GrayImage read_pgm(const std::filesystem::path& path) {
  const auto blob = slurp(path);
  if (blob.size() < 2 || blob[0] != 'P' || (blob[1] != '5' && blob[1] != '2')) {
    throw Error(Errc::BadMagic, path.string() + " is not a PGM file");
  }
  const bool binary = blob[1] == '5';
  PgmCursor cur{blob, 2};
  const long width = cur.number();
  const long height = cur.number();
  const long maxval = cur.number();
  if (width <= 0 || height <= 0 || width > 0xFFFF || height > 0xFFFF || maxval <= 0 ||
      maxval > 65535) {
    throw Error(Errc::Parse, path.string() + ": invalid PGM dimensions");
  }
  GrayImage img(SensorGeometry{static_cast<std::uint16_t>(width), static_cast<std::uint16_t>(height)});
  const double scale = 1.0 / static_cast<double>(maxval);
  if (binary) {
    ++cur.pos;  // single whitespace after maxval
    const std::size_t bytes = maxval > 255 ? 2 : 1;
    if (blob.size() < cur.pos + img.size() * bytes) {
      throw Error(Errc::TruncatedRecord, path.string() + ": PGM raster is short");
    }
    for (std::size_t i = 0; i < img.size(); ++i) {
      const std::uint8_t* p = blob.data() + cur.pos + i * bytes;
      const unsigned v = bytes == 2 ? (unsigned{p[0]} << 8) | p[1] : p[0];
      img.pixels[i] = v * scale;
    }
  } else {
    for (auto& px : img.pixels) px = static_cast<double>(cur.number()) * scale;
  }
  return img;
}

void write_pgm(const std::filesystem::path& path, const GrayImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  out << "P5\n" << image.geometry.width << ' ' << image.geometry.height << "\n255\n";
  std::vector<char> raster(image.size());
  for (std::size_t i = 0; i < image.size(); ++i) {
    raster[i] = static_cast<char>(
        static_cast<std::uint8_t>(std::lround(std::clamp(image.pixels[i], 0.0, 1.0) * 255.0)));
  }
  out.write(raster.data(), static_cast<std::streamsize>(raster.size()));
}

BinaryMask read_mask_pgm(const std::filesystem::path& path) {
  const GrayImage img = read_pgm(path);
  BinaryMask mask(img.geometry);
  for (std::size_t i = 0; i < img.size(); ++i) mask.pixels[i] = img.pixels[i] > 0.0 ? 1 : 0;
  return mask;
}

void write_mask_pgm(const std::filesystem::path& path, const BinaryMask& mask) {
  GrayImage img(mask.geometry);
  for (std::size_t i = 0; i < mask.size(); ++i) img.pixels[i] = mask.pixels[i] ? 1.0 : 0.0;
  write_pgm(path, img);
}

std::vector<std::uint8_t> encode_mask_bits(const BinaryMask& mask) {
  const std::size_t n = mask.size();
  std::vector<std::uint8_t> out(10 + (n + 7) / 8, 0);
  std::memcpy(out.data(), "MSK1", 4);
  out[4] = 1;
  out[6] = static_cast<std::uint8_t>(mask.geometry.width);
  out[7] = static_cast<std::uint8_t>(mask.geometry.width >> 8);
  out[8] = static_cast<std::uint8_t>(mask.geometry.height);
  out[9] = static_cast<std::uint8_t>(mask.geometry.height >> 8);
  for (std::size_t i = 0; i < n; ++i) {
    if (mask.pixels[i]) out[10 + i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  }
  return out;
}

BinaryMask decode_mask_bits(std::span<const std::uint8_t> blob) {
  if (blob.size() < 10 || std::memcmp(blob.data(), "MSK1", 4) != 0) {
    throw Error(Errc::BadMagic, "missing MSK1 magic");
  }
  if (blob[4] != 1 || blob[5] != 0) throw Error(Errc::BadMagic, "unsupported MSK1 version");
  SensorGeometry g{static_cast<std::uint16_t>(blob[6] | (blob[7] << 8)),
                   static_cast<std::uint16_t>(blob[8] | (blob[9] << 8))};
  g.validate();
  if (blob.size() != 10 + (g.pixel_count() + 7) / 8) {
    throw Error(Errc::TruncatedRecord, "mask bitset size does not match its header");
  }
  BinaryMask mask(g);
  for (std::size_t i = 0; i < mask.size(); ++i) mask.pixels[i] = (blob[10 + i / 8] >> (i % 8)) & 1u;
  return mask;
}

std::vector<std::filesystem::path> list_files(const std::filesystem::path& dir,
                                              const std::string& extension) {
  if (!std::filesystem::is_directory(dir)) throw Error(Errc::Io, dir.string() + " is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == extension) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
    const auto na = trailing_number(a.stem().string());
    const auto nb = trailing_number(b.stem().string());
    return na != nb ? na < nb : a.filename() < b.filename();
  });
  return files;
}

}  // namespace evpose
