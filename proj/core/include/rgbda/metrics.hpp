// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rgbda/image.hpp"
#include "rgbda/manifest.hpp"

namespace rgbda {

struct EvalCrop {
  int u0 = 0;
  int v0 = 0;
  int width = 0;
  int height = 0;
};

struct EvalConfig {
  double min_depth = 1e-3;  // meters
  double max_depth = 80.0;  // meters
  std::optional<EvalCrop> crop;

  void validate() const;
};

/// Monocular depth evaluation suite over valid pixels i = 1..N:
///   rel      = mean(|y - p| / y)
///   sq_rel   = mean(|y - p|^2 / y)
///   rms      = sqrt(mean((y - p)^2))            [meters]
///   rms_log  = sqrt(mean((ln y - ln p)^2))
///   delta_j  = fraction with max(y/p, p/y) < 1.25^j (strict)
struct MetricsReport {
  double delta1 = 0.0;
  double delta2 = 0.0;
  double delta3 = 0.0;
  double rel = 0.0;
  double sq_rel = 0.0;
  double rms = 0.0;
  double rms_log = 0.0;
  size_t n_pixels = 0;
};

/// Streaming accumulator so frames can be pooled pixel-wise.
class MetricsAccumulator {
 public:
  /// A pixel participates when the ground truth is valid, inside the crop,
  /// and within [min_depth, max_depth]. Predictions are clamped to that range
  /// first (invalid predictions clamp to min_depth).
  void add(const DepthMap& pred, const DepthMap& gt, const EvalConfig& cfg);

  size_t pixel_count() const { return count_; }

  /// Throws std::runtime_error when no pixel was accumulated.
  MetricsReport finalize() const;

 private:
  double abs_rel_sum_ = 0.0;
  double sq_rel_sum_ = 0.0;
  double sq_err_sum_ = 0.0;
  double sq_log_err_sum_ = 0.0;
  size_t d1_ = 0, d2_ = 0, d3_ = 0;
  size_t count_ = 0;
};

/// Single-pair evaluation. Throws std::invalid_argument on size mismatch and
/// std::runtime_error when no pixel passes the validity rule.
MetricsReport evaluate(const DepthMap& pred, const DepthMap& gt, const EvalConfig& cfg = {});

struct ManifestEvalResult {
  MetricsReport aggregate;  // pixel-pooled across all paired frames
  std::vector<std::pair<std::string, MetricsReport>> per_frame;
  std::vector<std::pair<std::string, std::string>> failed;  // frame_id -> reason
  std::vector<std::string> unmatched_pred;
  std::vector<std::string> unmatched_gt;

  std::string to_json_string() const;
  std::string to_csv() const;
};

/// Pairs records by frame_id and evaluates each pair; ground-truth depth is
/// restricted to its occupancy mask when the record carries one. Throws
/// std::runtime_error when no frame id is shared (listing both sides'
/// orphans) or when every paired frame fails.
ManifestEvalResult evaluate_manifest(const DatasetManifest& pred,
                                     const std::filesystem::path& pred_base,
                                     const DatasetManifest& gt,
                                     const std::filesystem::path& gt_base,
                                     const EvalConfig& cfg = {});

}  // namespace rgbda
