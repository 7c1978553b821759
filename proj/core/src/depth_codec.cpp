// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

#include "rgbda/depth_codec.hpp"

#include <algorithm>
#include <cmath>

#include "rgbda/png_io.hpp"

namespace rgbda {

DepthMap read_depth_png(std::span<const uint8_t> bytes) {
  const png_io::Gray16 raw = png_io::decode_gray16(bytes);
  DepthMap out(raw.width, raw.height);
  for (int v = 0; v < raw.height; ++v) {
    for (int u = 0; u < raw.width; ++u) {
      const uint16_t stored = raw.values[static_cast<size_t>(v) * raw.width + u];
      if (stored > 0) out.set(u, v, stored / 256.0);
    }
  }
  return out;
}

std::vector<uint8_t> write_depth_png(const DepthMap& depth) {
  png_io::Gray16 raw{depth.width(), depth.height(), {}};
  raw.values.resize(static_cast<size_t>(depth.width()) * depth.height(), 0);
  for (int v = 0; v < depth.height(); ++v) {
    for (int u = 0; u < depth.width(); ++u) {
      if (!depth.valid(u, v)) continue;
      const long stored = std::lround(depth.at(u, v) * 256.0);
      raw.values[static_cast<size_t>(v) * depth.width() + u] =
          static_cast<uint16_t>(std::clamp(stored, 0L, 65535L));
    }
  }
  return png_io::encode_gray16(raw);
}

Image read_rgb_png(std::span<const uint8_t> bytes) {
  const png_io::Rgb8 raw = png_io::decode_rgb8(bytes);
  Image out(raw.width, raw.height);
  for (int v = 0; v < raw.height; ++v) {
    for (int u = 0; u < raw.width; ++u) {
      const size_t i = (static_cast<size_t>(v) * raw.width + u) * 3;
      out.set_rgb(u, v, raw.values[i] / 255.0f, raw.values[i + 1] / 255.0f,
                  raw.values[i + 2] / 255.0f);
    }
  }
  return out;
}

std::vector<uint8_t> write_rgb_png(const Image& rgb) {
  png_io::Rgb8 raw{rgb.width(), rgb.height(), {}};
  raw.values.resize(static_cast<size_t>(rgb.width()) * rgb.height() * 3);
  for (int v = 0; v < rgb.height(); ++v) {
    for (int u = 0; u < rgb.width(); ++u) {
      const size_t i = (static_cast<size_t>(v) * rgb.width() + u) * 3;
      for (int c = 0; c < 3; ++c) {
        const float x = std::clamp(rgb.at(u, v, c), 0.0f, 1.0f);
        raw.values[i + c] = static_cast<uint8_t>(std::lround(x * 255.0f));
      }
    }
  }
  return png_io::encode_rgb8(raw);
}

OccupancyMask read_mask_png(std::span<const uint8_t> bytes) {
  const png_io::Gray8 raw = png_io::decode_gray8(bytes);
  OccupancyMask out(raw.width, raw.height);
  for (int v = 0; v < raw.height; ++v)
    for (int u = 0; u < raw.width; ++u)
      out.set(u, v, raw.values[static_cast<size_t>(v) * raw.width + u] != 0);
  return out;
}

std::vector<uint8_t> write_mask_png(const OccupancyMask& mask) {
  png_io::Gray8 raw{mask.width(), mask.height(), {}};
  raw.values.resize(static_cast<size_t>(mask.width()) * mask.height());
  for (int v = 0; v < mask.height(); ++v)
    for (int u = 0; u < mask.width(); ++u)
      raw.values[static_cast<size_t>(v) * mask.width() + u] = mask.at(u, v) ? 255 : 0;
  return png_io::encode_gray8(raw);
}

DepthMap load_depth(const std::filesystem::path& path) {
  return read_depth_png(png_io::read_file(path));
}

void save_depth(const std::filesystem::path& path, const DepthMap& depth) {
  png_io::write_file(path, write_depth_png(depth));
}

Image load_rgb(const std::filesystem::path& path) {
  return read_rgb_png(png_io::read_file(path));
}

void save_rgb(const std::filesystem::path& path, const Image& rgb) {
  png_io::write_file(path, write_rgb_png(rgb));
}

OccupancyMask load_mask(const std::filesystem::path& path) {
  return read_mask_png(png_io::read_file(path));
}

void save_mask(const std::filesystem::path& path, const OccupancyMask& mask) {
  png_io::write_file(path, write_mask_png(mask));
}

}  // namespace rgbda
