// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace rgbda::png_io {

struct Gray16 {
  int width = 0;
  int height = 0;
  std::vector<uint16_t> values;  // row-major
};

struct Rgb8 {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> values;  // row-major, interleaved RGB
};

struct Gray8 {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> values;
};

// Encoders emit a canonical stream (fixed filter and compression settings, no
// ancillary chunks), so re-encoding a decoded file reproduces it byte for byte.
std::vector<uint8_t> encode_gray16(const Gray16& img);
std::vector<uint8_t> encode_rgb8(const Rgb8& img);
std::vector<uint8_t> encode_gray8(const Gray8& img);

// Decoders throw std::runtime_error on malformed input or an unexpected
// format (bit depth / channel count).
Gray16 decode_gray16(std::span<const uint8_t> bytes);
Rgb8 decode_rgb8(std::span<const uint8_t> bytes);
Gray8 decode_gray8(std::span<const uint8_t> bytes);

std::vector<uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const uint8_t> bytes);

}  // namespace rgbda::png_io
