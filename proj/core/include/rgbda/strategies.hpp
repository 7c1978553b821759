// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rgbda/pose.hpp"

namespace rgbda {

enum class StrategyKind {
  kReconstruction,
  kInterpolation,
  kAngled,
  kTranslateHorizontal,
  kTranslateVertical,
  kRandomPerturb,
};

std::string to_string(StrategyKind kind);
StrategyKind strategy_kind_from_string(const std::string& name);

/// Parameters for one pose-synthesis strategy. Unused fields are ignored by
/// the strategies that do not read them.
struct StrategySpec {
  StrategyKind kind = StrategyKind::kReconstruction;
  double angle_deg = 3.0;       // angled: yaw magnitude
  double translate_m = 0.30;    // translate-horizontal/vertical: offset magnitude
  int interp_count = 1;         // interpolation: poses per consecutive pair
  bool camera_frame = true;     // translate in camera axes (image right / image down)
                                // instead of world axes
  double perturb_translate_m = 0.30;  // random-perturb: per-axis range
  double perturb_rotate_deg = 3.0;    // random-perturb: per-axis range
  uint64_t seed = 0;                  // random-perturb only

  void validate() const;
};

/// One synthesized pose with its provenance.
struct SynthesizedPose {
  Pose pose;
  int source_index = 0;  // interpolation: index of the left pose of the pair
  StrategyKind strategy = StrategyKind::kReconstruction;
  std::string parameter;  // e.g. "yaw=+3deg", "s=1/2", "dx=-0.3m"
};

/// Expands an ordered pose trajectory into novel poses per `spec`.
/// Output counts by strategy for n input poses: reconstruction n,
/// interpolation (n-1)*interp_count, angled 2n, each translation 2n,
/// random-perturb n. Bit-reproducible for a fixed seed.
/// Throws std::invalid_argument on an empty pose list or invalid spec.
std::vector<SynthesizedPose> synthesize_poses(const std::vector<Pose>& poses,
                                              const StrategySpec& spec);

}  // namespace rgbda
