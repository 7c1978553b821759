// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>

#include "rgbda/camera.hpp"
#include "rgbda/image.hpp"
#include "rgbda/point_cloud.hpp"
#include "rgbda/pose.hpp"

namespace rgbda {

/// Unprojects every valid depth pixel into a world-frame point cloud.
/// The camera-frame point for pixel (u, v) with depth d is
/// ((u-cx)/fx*d, (v-cy)/fy*d, d); `pose` maps it to world coordinates.
/// Output order is row-major over valid pixels.
/// Throws std::invalid_argument when depth and intrinsics sizes disagree.
PointCloud unproject(const DepthMap& depth, const CameraIntrinsics& intr, const Pose& pose);

/// Colored variant: attaches the RGB value of each valid pixel to its point.
PointCloud unproject(const DepthMap& depth, const Image& rgb, const CameraIntrinsics& intr,
                     const Pose& pose);

/// Forward-projects a cloud into the camera at `pose` (camera-to-world).
/// Points with camera-frame z > 0 that land in bounds are rasterized with a
/// z-buffer (minimum depth per pixel); uncovered pixels stay invalid.
DepthMap project(const PointCloud& cloud, const CameraIntrinsics& intr, const Pose& pose);

/// Marks each pixel hit by at least one point with camera-frame z > 0.
OccupancyMask occupancy_mask(const PointCloud& cloud, const CameraIntrinsics& intr,
                             const Pose& novel_pose);

namespace detail {

/// Continuous image coordinates round to the nearest pixel center with
/// half-way values going to the lower index.
inline int round_pixel(double x) { return static_cast<int>(std::ceil(x - 0.5)); }

struct PixelHit {
  int u;
  int v;
  double z;
};

/// Projects a world point through a world-to-camera transform; empty when the
/// point is behind the camera or outside the image.
std::optional<PixelHit> project_point(const Eigen::Vector3d& world,
                                      const Eigen::Matrix3d& rot_wc,
                                      const Eigen::Vector3d& t_wc,
                                      const CameraIntrinsics& intr);

}  // namespace detail

}  // namespace rgbda
