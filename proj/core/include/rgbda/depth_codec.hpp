// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "rgbda/image.hpp"

namespace rgbda {

// Depth maps travel as 16-bit grayscale PNG with depth_meters = stored / 256
// and stored 0 marking an invalid pixel (the KITTI devkit convention).

/// Throws std::runtime_error on malformed, non-16-bit, or multi-channel input.
DepthMap read_depth_png(std::span<const uint8_t> bytes);

/// Exact inverse of read_depth_png up to the 1/256 m quantization:
/// stored = round(meters * 256), saturating at 65535.
std::vector<uint8_t> write_depth_png(const DepthMap& depth);

Image read_rgb_png(std::span<const uint8_t> bytes);
std::vector<uint8_t> write_rgb_png(const Image& rgb);

OccupancyMask read_mask_png(std::span<const uint8_t> bytes);
std::vector<uint8_t> write_mask_png(const OccupancyMask& mask);

DepthMap load_depth(const std::filesystem::path& path);
void save_depth(const std::filesystem::path& path, const DepthMap& depth);
Image load_rgb(const std::filesystem::path& path);
void save_rgb(const std::filesystem::path& path, const Image& rgb);
OccupancyMask load_mask(const std::filesystem::path& path);
void save_mask(const std::filesystem::path& path, const OccupancyMask& mask);

}  // namespace rgbda
