// Copyright 2026 The evpose Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "evpose/image.hpp"

namespace evpose {

/// Reads binary (P5) or ASCII (P2) PGM, 8 or 16 bit, scaled to [0, 1].
GrayImage read_pgm(const std::filesystem::path& path);
/// Writes 8-bit P5, rounding intensity * 255.
void write_pgm(const std::filesystem::path& path, const GrayImage& image);

/// Mask as PGM: any non-zero pixel is foreground. Written as 0/255.
BinaryMask read_mask_pgm(const std::filesystem::path& path);
void write_mask_pgm(const std::filesystem::path& path, const BinaryMask& mask);

// Raw bitset: "MSK1", version u16 = 1, width u16, height u16, then ceil(W*H/8) bytes,
// row-major pixels, least significant bit first.
std::vector<std::uint8_t> encode_mask_bits(const BinaryMask& mask);
BinaryMask decode_mask_bits(std::span<const std::uint8_t> blob);

/// Sorted regular files in `dir` whose extension equals `extension` (e.g. ".pgm").
std::vector<std::filesystem::path> list_files(const std::filesystem::path& dir,
                                              const std::string& extension);

}  // namespace evpose
