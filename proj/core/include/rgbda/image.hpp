// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rgbda {

/// Dense per-pixel metric depth in meters. A value of 0 marks an invalid
/// pixel; every valid value is strictly positive and finite.
class DepthMap {
 public:
  DepthMap() = default;
  DepthMap(int width, int height)
      : width_(width), height_(height),
        values_(static_cast<size_t>(width) * height, 0.0) {
    if (width < 1 || height < 1)
      throw std::invalid_argument("depth map: size must be at least 1x1");
  }

  int width() const { return width_; }
  int height() const { return height_; }

  double at(int u, int v) const { return values_[idx(u, v)]; }

  void set(int u, int v, double meters) {
    if (meters != 0.0 && !(meters > 0.0 && std::isfinite(meters)))
      throw std::invalid_argument("depth map: valid depth must be positive and finite");
    values_[idx(u, v)] = meters;
  }

  void set_invalid(int u, int v) { values_[idx(u, v)] = 0.0; }

  bool valid(int u, int v) const { return values_[idx(u, v)] > 0.0; }

  size_t valid_count() const {
    size_t n = 0;
    for (double d : values_) n += (d > 0.0);
    return n;
  }

  const std::vector<double>& data() const { return values_; }

  bool operator==(const DepthMap&) const = default;

 private:
  size_t idx(int u, int v) const { return static_cast<size_t>(v) * width_ + u; }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
};

/// RGB image with channel values in [0, 1], interleaved row-major.
class Image {
 public:
  Image() = default;
  Image(int width, int height)
      : width_(width), height_(height),
        data_(static_cast<size_t>(width) * height * 3, 0.0f) {
    if (width < 1 || height < 1)
      throw std::invalid_argument("image: size must be at least 1x1");
  }

  int width() const { return width_; }
  int height() const { return height_; }

  float at(int u, int v, int c) const { return data_[idx(u, v, c)]; }
  void set(int u, int v, int c, float value) { data_[idx(u, v, c)] = value; }

  void set_rgb(int u, int v, float r, float g, float b) {
    const size_t i = idx(u, v, 0);
    data_[i] = r;
    data_[i + 1] = g;
    data_[i + 2] = b;
  }

  const std::vector<float>& data() const { return data_; }

  bool operator==(const Image&) const = default;

 private:
  size_t idx(int u, int v, int c) const {
    return (static_cast<size_t>(v) * width_ + u) * 3 + c;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<float> data_;
};

/// Binary per-pixel grid marking pixels covered by at least one point.
class OccupancyMask {
 public:
  OccupancyMask() = default;
  OccupancyMask(int width, int height)
      : width_(width), height_(height),
        bits_(static_cast<size_t>(width) * height, 0) {
    if (width < 1 || height < 1)
      throw std::invalid_argument("mask: size must be at least 1x1");
  }

  int width() const { return width_; }
  int height() const { return height_; }

  bool at(int u, int v) const { return bits_[idx(u, v)] != 0; }
  void set(int u, int v, bool value = true) { bits_[idx(u, v)] = value ? 1 : 0; }

  size_t set_count() const {
    size_t n = 0;
    for (uint8_t b : bits_) n += b;
    return n;
  }

  const std::vector<uint8_t>& bits() const { return bits_; }

  bool operator==(const OccupancyMask&) const = default;

 private:
  size_t idx(int u, int v) const { return static_cast<size_t>(v) * width_ + u; }

  int width_ = 0;
  int height_ = 0;
  std::vector<uint8_t> bits_;
};

}  // namespace rgbda
