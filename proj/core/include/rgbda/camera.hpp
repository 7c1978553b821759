// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace rgbda {

/// Pinhole camera intrinsics. Pixel (u, v) indexes columns/rows, with
/// u in [0, width-1] and v in [0, height-1].
struct CameraIntrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;

  void validate() const {
    if (width < 1 || height < 1)
      throw std::invalid_argument("intrinsics: image size must be at least 1x1");
    if (!(fx > 0.0) || !(fy > 0.0))
      throw std::invalid_argument("intrinsics: focal lengths must be positive");
    if (!(cx >= 0.0 && cx < width) || !(cy >= 0.0 && cy < height))
      throw std::invalid_argument("intrinsics: principal point outside image");
  }

  bool operator==(const CameraIntrinsics&) const = default;
};

}  // namespace rgbda
