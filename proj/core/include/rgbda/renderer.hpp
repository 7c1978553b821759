// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rgbda/geometry.hpp"
#include "rgbda/subscene.hpp"

namespace rgbda {

struct SplatParams {
  int splat_radius_px = 1;          // each point covers a (2r+1)^2 footprint
  double zbuffer_epsilon_m = 1e-4;  // closer-by-less-than-eps does not displace the winner

  void validate() const;
};

/// A dense novel-view render. Depth-valid pixels are always mask-set and
/// rgb is black outside the mask.
struct RenderedView {
  Image rgb;
  DepthMap depth;
  OccupancyMask mask;
  std::string subscene_id;
  Pose pose;
  std::string strategy;   // provenance tag, e.g. "angled"
  std::string parameter;  // provenance parameter, e.g. "yaw=+3deg"
};

/// Outcome of rendering one pose; `view` is empty on failure.
struct RenderResult {
  std::optional<RenderedView> view;
  std::string error;
};

/// Unprojects every train-split frame into one colored world-frame cloud.
/// Throws std::runtime_error when the train split is empty.
PointCloud build_train_cloud(const SubScene& sub);

/// Forward-splats a prebuilt cloud into the camera at `pose`. Per pixel the
/// nearest point wins depth and color; the mask marks every covered pixel.
RenderedView render_splat_from_cloud(const PointCloud& cloud, const CameraIntrinsics& intr,
                                     const Pose& pose, const SplatParams& params);

/// Convenience: build_train_cloud + render_splat_from_cloud.
RenderedView render_splat(const SubScene& sub, const Pose& pose, const SplatParams& params);

/// Batch renderer contract used by quality scoring and the pipeline stages.
class Renderer {
 public:
  virtual ~Renderer() = default;

  /// One result per pose, in pose order. Per-pose failures are reported in
  /// RenderResult::error; an unusable sub-scene (e.g. empty train split)
  /// throws instead.
  virtual std::vector<RenderResult> render_batch(const SubScene& sub,
                                                 const std::vector<Pose>& poses) const = 0;
};

class SplatRenderer : public Renderer {
 public:
  explicit SplatRenderer(SplatParams params = {}) : params_(params) { params_.validate(); }

  std::vector<RenderResult> render_batch(const SubScene& sub,
                                         const std::vector<Pose>& poses) const override;

 private:
  SplatParams params_;
};

struct ExternalRenderConfig {
  std::filesystem::path exchange_dir;
  std::filesystem::path subscene_dir;  // recorded in the request for the external tool
  double timeout_sec = 0.0;            // 0 = single directory scan, no waiting
  double poll_interval_sec = 0.1;
};

/// File-exchange rendering slot for an external (e.g. neural) renderer.
/// Writes `request.json`, `target_poses.txt`, and `calib.txt` into the
/// exchange directory, then ingests responses from
/// `<exchange_dir>/<pose_index>/{rgb.png, depth.png}`. Each response is
/// validated against the sub-scene calibration; occupancy masks are computed
/// from the train cloud and applied to the ingested RGB-D pair. Missing or
/// ill-formed responses yield per-pose error records, not a batch failure.
std::vector<RenderResult> render_external(const SubScene& sub, const std::vector<Pose>& poses,
                                          const ExternalRenderConfig& config);

/// Renderer adapter over render_external. `base.exchange_dir` acts as a
/// root: each sub-scene exchanges files under
/// `<root>/<scene>_<subscene_index>/`.
class ExchangeRenderer : public Renderer {
 public:
  explicit ExchangeRenderer(ExternalRenderConfig base) : base_(std::move(base)) {}

  static std::string exchange_dir_name(const SubScene& sub);

  std::vector<RenderResult> render_batch(const SubScene& sub,
                                         const std::vector<Pose>& poses) const override;

 private:
  ExternalRenderConfig base_;
};

}  // namespace rgbda
