// Copyright 2026 The evpose Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace evpose {

/// Dense C x H x W float tensor, row-major with channel outermost.
struct Tensor3 {
  std::uint32_t channels = 0;
  std::uint32_t height = 0;
  std::uint32_t width = 0;
  std::vector<float> data;

  std::size_t index(std::uint32_t c, std::uint32_t y, std::uint32_t x) const noexcept {
    return (std::size_t{c} * height + y) * width + x;
  }

  friend bool operator==(const Tensor3&, const Tensor3&) = default;
};

// Container layout: magic "TORE", C u32, H u32, W u32 (little-endian), then C*H*W
// little-endian IEEE-754 float32 values.
std::vector<std::uint8_t> encode_tensor(const Tensor3& t);
Tensor3 decode_tensor(std::span<const std::uint8_t> blob);

void write_tensor_file(const std::filesystem::path& path, const Tensor3& t);
Tensor3 read_tensor_file(const std::filesystem::path& path);

/// Lossless text dump: a `C H W` line, then one line per (c, y) row of
/// `%.9g`-formatted values (9 significant digits round-trip float32).
void write_tensor_text(std::ostream& out, const Tensor3& t);
Tensor3 read_tensor_text(std::istream& in);

}  // namespace evpose
