// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "rgbda/camera.hpp"
#include "rgbda/pose.hpp"

namespace rgbda {

/// One dataset entry. Paths are relative to the manifest's location.
/// `origin` is "original" or a strategy tag; (origin, source_frame,
/// parameter) triples are unique within a manifest.
struct ManifestRecord {
  std::string frame_id;
  std::string rgb_path;
  std::string depth_path;
  std::string mask_path;  // empty when absent
  Pose pose;
  std::string intrinsics_id;
  std::string origin = "original";
  std::string source_frame;
  std::string parameter;
  std::string subscene_id;
};

struct DatasetManifest {
  std::vector<ManifestRecord> records;
  std::map<std::string, CameraIntrinsics> intrinsics;
  uint64_t seed = 0;

  std::string to_json_string() const;
  static DatasetManifest from_json_string(const std::string& text);

  void save(const std::filesystem::path& path) const;
  static DatasetManifest load(const std::filesystem::path& path);

  /// Checks referenced files exist under `base_dir`, intrinsics ids resolve,
  /// and provenance triples are unique. Throws std::runtime_error listing
  /// every offender.
  void validate(const std::filesystem::path& base_dir) const;
};

/// Count (absolute) or percentage of the original record count.
struct MergeCap {
  enum class Kind { kCount, kPercent };
  Kind kind = Kind::kCount;
  double value = 0.0;

  static MergeCap count(uint64_t n) { return {Kind::kCount, static_cast<double>(n)}; }
  static MergeCap percent(double p) { return {Kind::kPercent, p}; }

  uint64_t resolve(size_t original_count) const;
};

/// Appends a seeded uniform sample of exactly min(cap, |pool|) pool records
/// to `original`. Selection is deterministic for a fixed seed; selected
/// records keep their pool order. Origin tags are preserved and the merge
/// seed is recorded in the result.
DatasetManifest merge_datasets(const DatasetManifest& original, const DatasetManifest& pool,
                               const MergeCap& cap, uint64_t seed);

}  // namespace rgbda
