// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "rgbda/camera.hpp"
#include "rgbda/image.hpp"
#include "rgbda/pose.hpp"

namespace rgbda {

/// One posed RGB-D training sample.
struct Frame {
  std::string frame_id;
  Image rgb;
  DepthMap depth;
  Pose pose;
};

/// A contiguous sequence of frames sharing one camera calibration.
struct Scene {
  std::string scene_id;
  CameraIntrinsics intrinsics;
  std::vector<Frame> frames;
};

/// A trajectory segment whose poses all lie within `max_extent` meters of the
/// first frame's translation, with a deterministic train/holdout partition.
struct SubScene {
  std::string scene_id;
  int subscene_index = 0;
  CameraIntrinsics intrinsics;
  std::vector<Frame> frames;
  std::vector<int> holdout;  // sorted frame indices withheld from fitting

  const Pose& anchor_pose() const { return frames.front().pose; }

  std::string id() const { return scene_id + "/" + std::to_string(subscene_index); }

  bool is_holdout(int index) const;
  std::vector<int> train_indices() const;
  std::vector<Pose> poses() const;
};

/// Deterministic holdout selection: round(n * fraction) indices (at least one
/// when n >= 2, never all of them), spread evenly over the sequence.
std::vector<int> holdout_indices(int frame_count, double holdout_fraction);

/// Greedy left-to-right partition of a scene: a new sub-scene starts at the
/// first frame whose translation lies further than `max_extent` meters from
/// the current anchor (the sub-scene's first frame). Sub-scenes partition the
/// input in order; each receives its holdout split.
/// Throws std::invalid_argument on empty input.
std::vector<SubScene> split_scene(Scene scene, double max_extent = 50.0,
                                  double holdout_fraction = 0.10);

}  // namespace rgbda
