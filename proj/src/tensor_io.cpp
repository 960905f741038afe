// Copyright 2026 The evpose Authors
// SPDX-License-Identifier: Apache-2.0

#include "evpose/tensor_io.hpp"

#include <bit>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <string>

#include "evpose/error.hpp"

namespace evpose {
namespace {

constexpr std::size_t kHeader = 16;

void put_u32(std::uint8_t* p, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) p[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t{p[i]} << (8 * i);
  return v;
}

std::size_t element_count(std::uint32_t c, std::uint32_t h, std::uint32_t w) {
  return std::size_t{c} * h * w;
}

}  // namespace

std::vector<std::uint8_t> encode_tensor(const Tensor3& t) {
  const std::size_t n = element_count(t.channels, t.height, t.width);
  if (t.data.size() != n) {
    throw Error(Errc::LengthMismatch, "tensor data size does not match its dimensions");
  }
  std::vector<std::uint8_t> out(kHeader + 4 * n);
  std::memcpy(out.data(), "TORE", 4);
  put_u32(out.data() + 4, t.channels);
  put_u32(out.data() + 8, t.height);
  put_u32(out.data() + 12, t.width);
  std::uint8_t* p = out.data() + kHeader;
  for (float v : t.data) {
    put_u32(p, std::bit_cast<std::uint32_t>(v));
    p += 4;
  }
  return out;
}

Tensor3 decode_tensor(std::span<const std::uint8_t> blob) {
  if (blob.size() < kHeader || std::memcmp(blob.data(), "TORE", 4) != 0) {
    throw Error(Errc::BadMagic, "missing TORE tensor magic");
  }
  Tensor3 t;
  t.channels = get_u32(blob.data() + 4);
  t.height = get_u32(blob.data() + 8);
  t.width = get_u32(blob.data() + 12);
  const std::size_t n = element_count(t.channels, t.height, t.width);
  if (blob.size() != kHeader + 4 * n) {
    throw Error(Errc::TruncatedRecord, "tensor payload size does not match its header");
  }
  t.data.resize(n);
  const std::uint8_t* p = blob.data() + kHeader;
  for (std::size_t i = 0; i < n; ++i, p += 4) t.data[i] = std::bit_cast<float>(get_u32(p));
  return t;
}

void write_tensor_file(const std::filesystem::path& path, const Tensor3& t) {
  const auto blob = encode_tensor(t);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(blob.data()), static_cast<std::streamsize>(blob.size()));
  if (!out) throw Error(Errc::Io, "short write to " + path.string());
}

Tensor3 read_tensor_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  std::vector<std::uint8_t> blob((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  return decode_tensor(blob);
}

void write_tensor_text(std::ostream& out, const Tensor3& t) {
  out << t.channels << ' ' << t.height << ' ' << t.width << '\n';
  char buf[32];
  std::size_t i = 0;
  for (std::uint32_t row = 0; row < t.channels * t.height; ++row) {
    for (std::uint32_t x = 0; x < t.width; ++x, ++i) {
      std::snprintf(buf, sizeof(buf), "%.9g", static_cast<double>(t.data[i]));
      if (x) out << ' ';
      out << buf;
    }
    out << '\n';
  }
}

Tensor3 read_tensor_text(std::istream& in) {
  Tensor3 t;
  if (!(in >> t.channels >> t.height >> t.width)) {
    throw Error(Errc::Parse, "tensor text dump lacks a dimension line");
  }
  t.data.resize(element_count(t.channels, t.height, t.width));
  for (float& v : t.data) {
    std::string token;
    if (!(in >> token)) throw Error(Errc::TruncatedRecord, "tensor text dump ends early");
    char* end = nullptr;
    v = std::strtof(token.c_str(), &end);
    if (end == token.c_str()) throw Error(Errc::Parse, "bad tensor value '" + token + "'");
  }
  return t;
}

}  // namespace evpose
