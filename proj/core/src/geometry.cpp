// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

#include "rgbda/geometry.hpp"

#include <stdexcept>

namespace rgbda {

namespace detail {

std::optional<PixelHit> project_point(const Eigen::Vector3d& world,
                                      const Eigen::Matrix3d& rot_wc,
                                      const Eigen::Vector3d& t_wc,
                                      const CameraIntrinsics& intr) {
  const Eigen::Vector3d cam = rot_wc * world + t_wc;
  if (!(cam.z() > 0.0)) return std::nullopt;
  const int u = round_pixel(intr.fx * cam.x() / cam.z() + intr.cx);
  const int v = round_pixel(intr.fy * cam.y() / cam.z() + intr.cy);
  if (u < 0 || u >= intr.width || v < 0 || v >= intr.height) return std::nullopt;
  return PixelHit{u, v, cam.z()};
}

}  // namespace detail

namespace {

void check_dims(const DepthMap& depth, const CameraIntrinsics& intr) {
  if (depth.width() != intr.width || depth.height() != intr.height)
    throw std::invalid_argument("unproject: depth map size does not match intrinsics");
}

PointCloud unproject_impl(const DepthMap& depth, const Image* rgb,
                          const CameraIntrinsics& intr, const Pose& pose) {
  check_dims(depth, intr);
  intr.validate();
  PointCloud cloud;
  cloud.points.reserve(depth.valid_count());
  if (rgb) cloud.colors.reserve(depth.valid_count());
  for (int v = 0; v < intr.height; ++v) {
    for (int u = 0; u < intr.width; ++u) {
      if (!depth.valid(u, v)) continue;
      const double d = depth.at(u, v);
      const Eigen::Vector3d cam((u - intr.cx) / intr.fx * d, (v - intr.cy) / intr.fy * d, d);
      cloud.points.push_back(pose.transform(cam));
      if (rgb) cloud.colors.push_back({rgb->at(u, v, 0), rgb->at(u, v, 1), rgb->at(u, v, 2)});
    }
  }
  return cloud;
}

}  // namespace

PointCloud unproject(const DepthMap& depth, const CameraIntrinsics& intr, const Pose& pose) {
  return unproject_impl(depth, nullptr, intr, pose);
}

PointCloud unproject(const DepthMap& depth, const Image& rgb, const CameraIntrinsics& intr,
                     const Pose& pose) {
  if (rgb.width() != depth.width() || rgb.height() != depth.height())
    throw std::invalid_argument("unproject: rgb size does not match depth map");
  return unproject_impl(depth, &rgb, intr, pose);
}

DepthMap project(const PointCloud& cloud, const CameraIntrinsics& intr, const Pose& pose) {
  intr.validate();
  const Pose w2c = pose.inverse();
  const Eigen::Matrix3d rot = w2c.rotation();
  const Eigen::Vector3d t = w2c.translation();
  DepthMap out(intr.width, intr.height);
  for (const auto& p : cloud.points) {
    const auto hit = detail::project_point(p, rot, t, intr);
    if (!hit) continue;
    const double cur = out.at(hit->u, hit->v);
    if (cur == 0.0 || hit->z < cur) out.set(hit->u, hit->v, hit->z);
  }
  return out;
}

OccupancyMask occupancy_mask(const PointCloud& cloud, const CameraIntrinsics& intr,
                             const Pose& novel_pose) {
  intr.validate();
  const Pose w2c = novel_pose.inverse();
  const Eigen::Matrix3d rot = w2c.rotation();
  const Eigen::Vector3d t = w2c.translation();
  OccupancyMask mask(intr.width, intr.height);
  for (const auto& p : cloud.points) {
    if (const auto hit = detail::project_point(p, rot, t, intr)) mask.set(hit->u, hit->v);
  }
  return mask;
}

}  // namespace rgbda
