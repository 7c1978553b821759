// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "rgbda/renderer.hpp"
#include "rgbda/subscene.hpp"

namespace rgbda {

/// Pass requires perceptual < perceptual AND abs_rel < absrel (both strict).
struct QualityThresholds {
  double perceptual = 0.22;
  double absrel = 0.05;

  void validate() const;
};

struct QualityConfig {
  double alpha = 10.0;
  QualityThresholds thresholds;
};

/// Depth/RGB trade-off measure sqrt(alpha * abs_rel^2 + perceptual^2).
double trade_off_measure(double alpha, double abs_rel, double perceptual);

struct FrameQuality {
  int frame_index = 0;  // index into the sub-scene's frame list
  std::string frame_id;
  double abs_rel = 0.0;
  double perceptual = 0.0;
  size_t overlap_pixels = 0;
  bool excluded = false;
  std::string note;
};

struct QualityReport {
  std::string subscene_id;
  double abs_rel = 0.0;
  double perceptual = 0.0;
  std::string perceptual_metric = "dssim";
  double t_rgbd = 0.0;
  double alpha = 10.0;
  bool pass = false;
  std::vector<FrameQuality> frames;

  std::string to_json_string() const;
  static QualityReport from_json_string(const std::string& text);
};

/// Mean DSSIM over luma: (1 - SSIM) / 2 with an 11x11 Gaussian window
/// (sigma 1.5) and the standard stabilizer constants. Symmetric, in [0, 1],
/// zero for identical images. Throws on size mismatch or images smaller than
/// the window.
double reference_perceptual(const Image& a, const Image& b);

/// Renders every holdout pose and scores the sub-scene: abs_rel is averaged
/// per frame over pixels valid in both the ground truth and the render mask;
/// the perceptual score is averaged over holdout RGB pairs. Frames with no
/// overlapping valid pixels (or failed renders) are excluded and flagged;
/// when every frame is excluded a std::runtime_error is thrown.
QualityReport score_subscene(const SubScene& sub, const Renderer& renderer,
                             const QualityConfig& cfg = {});

/// Same scoring given pre-rendered holdout views (aligned with sub.holdout).
QualityReport score_from_views(const SubScene& sub, const std::vector<RenderResult>& views,
                               const QualityConfig& cfg = {});

/// Parses a JSON object mapping sub-scene id to a perceptual score in [0, 1].
/// An empty file yields no overrides. Unknown ids and out-of-range scores are
/// collected and reported together in a std::runtime_error.
std::map<std::string, double> ingest_external_scores(const std::filesystem::path& file,
                                                     const std::set<std::string>& known_ids);

/// Replaces the perceptual score of the listed reports, tags the metric
/// "lpips-external", and recomputes t_rgbd and pass.
void apply_external_scores(std::vector<QualityReport>& reports,
                           const std::map<std::string, double>& overrides,
                           const QualityConfig& cfg = {});

struct FilterResult {
  std::vector<std::string> kept;
  std::vector<std::string> rejected;
  std::map<std::string, std::string> reasons;  // rejected id -> reason
};

/// Partitions reports by the pass rule under the given thresholds,
/// preserving input order.
FilterResult filter_subscenes(const std::vector<QualityReport>& reports,
                              const QualityThresholds& thresholds);

}  // namespace rgbda
