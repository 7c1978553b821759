// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

#include "rgbda/subscene.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rgbda {

bool SubScene::is_holdout(int index) const {
  return std::binary_search(holdout.begin(), holdout.end(), index);
}

std::vector<int> SubScene::train_indices() const {
  std::vector<int> out;
  out.reserve(frames.size() - holdout.size());
  for (int i = 0; i < static_cast<int>(frames.size()); ++i)
    if (!is_holdout(i)) out.push_back(i);
  return out;
}

std::vector<Pose> SubScene::poses() const {
  std::vector<Pose> out;
  out.reserve(frames.size());
  for (const auto& f : frames) out.push_back(f.pose);
  return out;
}

std::vector<int> holdout_indices(int frame_count, double holdout_fraction) {
  if (frame_count < 2 || holdout_fraction <= 0.0) return {};
  long count = std::lround(frame_count * holdout_fraction);
  count = std::clamp(count, 1L, static_cast<long>(frame_count) - 1);
  std::vector<int> out;
  out.reserve(count);
  const double stride = static_cast<double>(frame_count) / count;
  for (long j = 0; j < count; ++j)
    out.push_back(static_cast<int>(std::floor((j + 0.5) * stride)));
  return out;
}

std::vector<SubScene> split_scene(Scene scene, double max_extent, double holdout_fraction) {
  if (scene.frames.empty()) throw std::invalid_argument("split_scene: empty frame list");
  if (!(max_extent > 0.0)) throw std::invalid_argument("split_scene: max_extent must be positive");

  std::vector<SubScene> out;
  SubScene current{scene.scene_id, 0, scene.intrinsics, {}, {}};
  Eigen::Vector3d anchor = scene.frames.front().pose.translation();
  for (auto& frame : scene.frames) {
    if (!current.frames.empty() &&
        (frame.pose.translation() - anchor).norm() > max_extent) {
      out.push_back(std::move(current));
      current = SubScene{scene.scene_id, static_cast<int>(out.size()), scene.intrinsics, {}, {}};
      anchor = frame.pose.translation();
    }
    current.frames.push_back(std::move(frame));
  }
  out.push_back(std::move(current));

  for (auto& sub : out)
    sub.holdout = holdout_indices(static_cast<int>(sub.frames.size()), holdout_fraction);
  return out;
}

}  // namespace rgbda
