// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rgbda/manifest.hpp"
#include "rgbda/metrics.hpp"
#include "rgbda/quality.hpp"
#include "rgbda/renderer.hpp"
#include "rgbda/strategies.hpp"
#include "rgbda/synthetic.hpp"

namespace rgbda {

/// Parameters for the built-in synthetic dataset generator (gen-scene).
struct SyntheticDatasetSpec {
  int scene_count = 2;
  int frame_count = 20;
  double spacing_m = 0.5;
  CameraIntrinsics intrinsics{160.0, 160.0, 80.0, 60.0, 160, 120};
  int sparsify_row_step = 1;
};

/// Configuration for every pipeline stage, loaded from one JSON file.
/// Relative paths in the file resolve against the file's directory.
struct PipelineConfig {
  std::filesystem::path dataset_root;
  std::filesystem::path output_root;
  uint64_t seed = 0;

  double max_extent_m = 50.0;
  double holdout_fraction = 0.10;
  std::vector<StrategySpec> strategies;  // defaults to the five standard strategies

  std::string renderer_kind = "builtin-splat";  // or "external"
  SplatParams splat;
  std::filesystem::path exchange_root;  // external renderer exchange directories
  double exchange_timeout_sec = 0.0;

  QualityConfig quality;                   // alpha 10, thresholds (0.22, 0.05)
  std::filesystem::path external_scores;   // optional perceptual-score override file

  QualityThresholds testset_thresholds{0.30, 0.05};
  int testset_frames_per_scene = 10;
  double testset_translate_range_m = 0.30;
  double testset_rotate_range_deg = 3.0;

  std::optional<MergeCap> merge_cap;      // absent = take the whole pool
  std::vector<MergeCap> saturation_caps;  // defaults to 1k/5k/10k/20k/50k
  std::filesystem::path merge_original_manifest;  // default: split stage output
  std::filesystem::path merge_pool_manifest;      // default: render stage output

  EvalConfig eval;
  std::filesystem::path eval_pred_manifest;  // default: render stage pool manifest
  std::filesystem::path eval_gt_manifest;    // default: split stage original manifest

  SyntheticDatasetSpec synthetic;

  static PipelineConfig from_json_string(const std::string& text);
  static PipelineConfig load(const std::filesystem::path& path);
  std::string to_json_string() const;
};

/// Procedural street-canyon scene: ground plane, facade boxes on both sides,
/// pole cylinders, straight trajectory. Layout varies with the seed.
SceneSpec make_street_scene(const SyntheticDatasetSpec& spec, uint64_t seed);

// Pipeline stages. Each stage validates its inputs, writes its outputs and a
// deterministic report.json under <output_root>/<stage>/, plus a volatile
// timing.json kept separate so stage outputs stay byte-identical across
// re-runs. Exit codes: 0 success, 1 validation error, 2 partial failure with
// survivors.
int run_gen_scene(const PipelineConfig& config);
int run_split(const PipelineConfig& config);
int run_synth(const PipelineConfig& config);
int run_render(const PipelineConfig& config, int jobs = 1);
int run_score(const PipelineConfig& config, int jobs = 1);
int run_filter(const PipelineConfig& config);
int run_merge(const PipelineConfig& config);
int run_eval(const PipelineConfig& config);
int run_gen_testset(const PipelineConfig& config, int jobs = 1);
int run_saturation(const PipelineConfig& config);

}  // namespace rgbda
