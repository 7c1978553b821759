// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

#include "rgbda/renderer.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "rgbda/dataset_io.hpp"
#include "rgbda/depth_codec.hpp"

namespace rgbda {

void SplatParams::validate() const {
  if (splat_radius_px < 0)
    throw std::invalid_argument("splat: radius must be non-negative");
  if (zbuffer_epsilon_m < 0.0)
    throw std::invalid_argument("splat: z-buffer epsilon must be non-negative");
}

PointCloud build_train_cloud(const SubScene& sub) {
  const auto train = sub.train_indices();
  if (train.empty())
    throw std::runtime_error("sub-scene " + sub.id() + " has no training frames");
  PointCloud cloud;
  for (int i : train) {
    const Frame& f = sub.frames[i];
    PointCloud part = unproject(f.depth, f.rgb, sub.intrinsics, f.pose);
    cloud.points.insert(cloud.points.end(), part.points.begin(), part.points.end());
    cloud.colors.insert(cloud.colors.end(), part.colors.begin(), part.colors.end());
  }
  return cloud;
}

RenderedView render_splat_from_cloud(const PointCloud& cloud, const CameraIntrinsics& intr,
                                     const Pose& pose, const SplatParams& params) {
  params.validate();
  intr.validate();

  const Pose w2c = pose.inverse();
  const Eigen::Matrix3d rot = w2c.rotation();
  const Eigen::Vector3d t = w2c.translation();
  const int r = params.splat_radius_px;
  const double eps = params.zbuffer_epsilon_m;

  RenderedView view;
  view.pose = pose;
  view.rgb = Image(intr.width, intr.height);
  view.depth = DepthMap(intr.width, intr.height);
  view.mask = OccupancyMask(intr.width, intr.height);

  std::vector<double> zbuf(static_cast<size_t>(intr.width) * intr.height,
                           std::numeric_limits<double>::infinity());

  for (size_t i = 0; i < cloud.points.size(); ++i) {
    const Eigen::Vector3d cam = rot * cloud.points[i] + t;
    if (!(cam.z() > 0.0)) continue;
    const int u0 = detail::round_pixel(intr.fx * cam.x() / cam.z() + intr.cx);
    const int v0 = detail::round_pixel(intr.fy * cam.y() / cam.z() + intr.cy);
    const int u_lo = std::max(u0 - r, 0);
    const int u_hi = std::min(u0 + r, intr.width - 1);
    const int v_lo = std::max(v0 - r, 0);
    const int v_hi = std::min(v0 + r, intr.height - 1);
    for (int v = v_lo; v <= v_hi; ++v) {
      for (int u = u_lo; u <= u_hi; ++u) {
        view.mask.set(u, v);
        double& z = zbuf[static_cast<size_t>(v) * intr.width + u];
        if (cam.z() < z - eps) {
          z = cam.z();
          if (cloud.has_colors()) {
            const auto& c = cloud.colors[i];
            view.rgb.set_rgb(u, v, c[0], c[1], c[2]);
          }
        }
      }
    }
  }

  for (int v = 0; v < intr.height; ++v) {
    for (int u = 0; u < intr.width; ++u) {
      const double z = zbuf[static_cast<size_t>(v) * intr.width + u];
      if (std::isfinite(z)) view.depth.set(u, v, z);
    }
  }
  return view;
}

RenderedView render_splat(const SubScene& sub, const Pose& pose, const SplatParams& params) {
  RenderedView view = render_splat_from_cloud(build_train_cloud(sub), sub.intrinsics, pose, params);
  view.subscene_id = sub.id();
  return view;
}

std::vector<RenderResult> SplatRenderer::render_batch(const SubScene& sub,
                                                      const std::vector<Pose>& poses) const {
  const PointCloud cloud = build_train_cloud(sub);
  std::vector<RenderResult> out;
  out.reserve(poses.size());
  for (const auto& pose : poses) {
    RenderedView view = render_splat_from_cloud(cloud, sub.intrinsics, pose, params_);
    view.subscene_id = sub.id();
    out.push_back({std::move(view), ""});
  }
  return out;
}

namespace {

namespace fs = std::filesystem;

bool responses_complete(const fs::path& dir, size_t count) {
  for (size_t i = 0; i < count; ++i) {
    const fs::path sub = dir / std::to_string(i);
    if (!fs::exists(sub / "rgb.png") || !fs::exists(sub / "depth.png")) return false;
  }
  return true;
}

}  // namespace

std::string ExchangeRenderer::exchange_dir_name(const SubScene& sub) {
  std::string name = sub.id();
  std::replace(name.begin(), name.end(), '/', '_');
  return name;
}

std::vector<RenderResult> ExchangeRenderer::render_batch(const SubScene& sub,
                                                         const std::vector<Pose>& poses) const {
  ExternalRenderConfig cfg = base_;
  cfg.exchange_dir = base_.exchange_dir / exchange_dir_name(sub);
  return render_external(sub, poses, cfg);
}

std::vector<RenderResult> render_external(const SubScene& sub, const std::vector<Pose>& poses,
                                          const ExternalRenderConfig& config) {
  fs::create_directories(config.exchange_dir);

  nlohmann::json request{{"subscene_id", sub.id()},
                         {"subscene_dir", config.subscene_dir.string()},
                         {"pose_count", poses.size()},
                         {"response_layout", "<pose_index>/{rgb.png, depth.png}"}};
  {
    std::ofstream out(config.exchange_dir / "request.json", std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write render request");
    out << request.dump(2) << "\n";
  }
  dataset_io::write_poses_txt(config.exchange_dir / "target_poses.txt", poses);
  dataset_io::write_calib_txt(config.exchange_dir / "calib.txt", sub.intrinsics);

  // Wait for the external tool within the timeout budget, if any.
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(config.timeout_sec));
  while (!responses_complete(config.exchange_dir, poses.size()) &&
         std::chrono::steady_clock::now() < deadline) {
    std::this_thread::sleep_for(std::chrono::duration<double>(config.poll_interval_sec));
  }

  const PointCloud cloud = build_train_cloud(sub);
  std::vector<RenderResult> out;
  out.reserve(poses.size());
  for (size_t i = 0; i < poses.size(); ++i) {
    const fs::path dir = config.exchange_dir / std::to_string(i);
    RenderResult result;
    try {
      Image rgb = load_rgb(dir / "rgb.png");
      DepthMap depth = load_depth(dir / "depth.png");
      if (rgb.width() != sub.intrinsics.width || rgb.height() != sub.intrinsics.height ||
          depth.width() != sub.intrinsics.width || depth.height() != sub.intrinsics.height) {
        throw std::runtime_error("response dimensions do not match calibration");
      }
      RenderedView view;
      view.subscene_id = sub.id();
      view.pose = poses[i];
      view.mask = occupancy_mask(cloud, sub.intrinsics, poses[i]);
      // Unseen regions carry no supervision; the mask blanks them out.
      view.depth = DepthMap(depth.width(), depth.height());
      view.rgb = Image(rgb.width(), rgb.height());
      for (int v = 0; v < depth.height(); ++v) {
        for (int u = 0; u < depth.width(); ++u) {
          if (!view.mask.at(u, v)) continue;
          if (depth.valid(u, v)) view.depth.set(u, v, depth.at(u, v));
          view.rgb.set_rgb(u, v, rgb.at(u, v, 0), rgb.at(u, v, 1), rgb.at(u, v, 2));
        }
      }
      result.view = std::move(view);
    } catch (const std::exception& e) {
      result.error = "pose " + std::to_string(i) + ": " + e.what();
    }
    out.push_back(std::move(result));
  }
  return out;
}

}  // namespace rgbda
