// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rgbda/subscene.hpp"

namespace rgbda::dataset_io {

// On-disk layout, one directory per (sub-)sequence:
//   <dir>/rgb/<frame_id>.png      8-bit RGB
//   <dir>/depth/<frame_id>.png    16-bit grayscale, value/256 meters, 0 invalid
//   <dir>/mask/<frame_id>.png     optional 8-bit binary occupancy
//   <dir>/poses.txt               one row-major 3x4 camera-to-world per line
//   <dir>/calib.txt               "fx fy cx cy width height"
//   <dir>/holdout.txt             optional frame indices withheld from fitting
// Frame order is the lexicographic order of the PNG file names, which is also
// the line order of poses.txt.

void write_poses_txt(const std::filesystem::path& path, const std::vector<Pose>& poses);
std::vector<Pose> read_poses_txt(const std::filesystem::path& path);

void write_calib_txt(const std::filesystem::path& path, const CameraIntrinsics& intr);
CameraIntrinsics read_calib_txt(const std::filesystem::path& path);

void write_subscene(const std::filesystem::path& dir, const SubScene& sub);

/// Reads one sequence directory. When holdout.txt is absent the holdout is
/// recomputed from `holdout_fraction`.
SubScene read_subscene(const std::filesystem::path& dir, const std::string& scene_id,
                       int subscene_index, double holdout_fraction = 0.10);

/// Sequence metadata without decoding any image.
struct SubSceneMeta {
  std::string scene_id;
  int subscene_index = 0;
  CameraIntrinsics intrinsics;
  std::vector<std::string> frame_ids;
  std::vector<Pose> poses;
  std::vector<int> holdout;

  std::string id() const { return scene_id + "/" + std::to_string(subscene_index); }
  std::vector<int> train_indices() const;
};

SubSceneMeta read_subscene_meta(const std::filesystem::path& dir, const std::string& scene_id,
                                int subscene_index, double holdout_fraction = 0.10);

/// Concatenates every sequence directory under `scene_dir` in lexicographic
/// order into one scene. All calibrations must agree.
Scene read_scene(const std::filesystem::path& scene_dir, const std::string& scene_id);

/// Scene directories under a dataset root, sorted by name.
std::vector<std::string> list_scenes(const std::filesystem::path& root);

/// Sequence directories under a scene directory, sorted by name.
std::vector<std::string> list_sequences(const std::filesystem::path& scene_dir);

}  // namespace rgbda::dataset_io
