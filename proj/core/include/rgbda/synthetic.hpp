// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "rgbda/camera.hpp"
#include "rgbda/subscene.hpp"

namespace rgbda {

/// Axis-aligned box in world coordinates (z up, ground at z = 0).
struct Box {
  Eigen::Vector3d min;
  Eigen::Vector3d max;
};

/// Vertical cylinder standing on the ground plane.
struct Cylinder {
  double x = 0.0;
  double y = 0.0;
  double radius = 0.3;
  double height = 4.0;
};

struct TrajectorySpec {
  enum class Path { kStraight, kArc };
  Path path = Path::kStraight;
  int frame_count = 20;
  double spacing_m = 0.5;       // along-track distance between frames
  double height_m = 1.6;        // camera height above the ground
  double arc_radius_m = 50.0;   // kArc: turn radius (left turn)
  double start_x = 0.0;
  double start_y = 0.0;
  double lateral_jitter_m = 0.0;  // seeded per-frame cross-track offset
};

struct SceneSpec {
  bool ground_plane = true;
  std::vector<Box> boxes;
  std::vector<Cylinder> cylinders;
  TrajectorySpec trajectory;
  CameraIntrinsics intrinsics;
  double min_range_m = 0.1;    // hits closer than this are discarded
  double max_range_m = 200.0;  // hits farther than this are invalid (sky-like)
  int sparsify_row_step = 1;   // keep every k-th depth row (1 = dense)
  uint64_t seed = 0;
};

/// Analytic scene built from exact ray-primitive intersections. Serves both
/// as a frame generator and as the ground-truth depth oracle for any pose.
class SyntheticScene {
 public:
  /// Throws std::invalid_argument for degenerate specs (camera at or below
  /// the ground, no primitives at all, bad trajectory or intrinsics).
  explicit SyntheticScene(SceneSpec spec);

  /// Exact z-depth per pixel; rays that hit nothing in range are invalid.
  DepthMap render_depth(const Pose& pose, const CameraIntrinsics& intr) const;

  /// Deterministic albedo of the hit primitive; black where no hit.
  Image render_rgb(const Pose& pose, const CameraIntrinsics& intr) const;

  std::vector<Pose> trajectory_poses() const;

  /// Frames along the trajectory; depth rows are sparsified per the spec.
  std::vector<Frame> generate_frames() const;

  const SceneSpec& spec() const { return spec_; }

 private:
  SceneSpec spec_;
};

}  // namespace rgbda
