// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <array>
#include <vector>

namespace rgbda {

/// World-frame 3D points, optionally colored (RGB in [0, 1]).
/// When colors are present there is exactly one color per point.
struct PointCloud {
  std::vector<Eigen::Vector3d> points;
  std::vector<std::array<float, 3>> colors;

  size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  bool has_colors() const { return !colors.empty(); }
};

}  // namespace rgbda
