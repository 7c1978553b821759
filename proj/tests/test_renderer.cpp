// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <numbers>

#include "rgbda/depth_codec.hpp"
#include "rgbda/png_io.hpp"
#include "rgbda/renderer.hpp"
#include "rgbda/synthetic.hpp"
#include "test_support.hpp"

using namespace rgbda;

namespace {

SceneSpec street_spec(int frames = 6) {
  SceneSpec spec;
  spec.intrinsics = {80.0, 80.0, 40.0, 30.0, 80, 60};
  spec.trajectory.frame_count = frames;
  spec.trajectory.spacing_m = 0.5;
  spec.trajectory.height_m = 1.6;
  spec.max_range_m = 60.0;
  spec.boxes = {{{2.0, 4.0, 0.0}, {30.0, 7.0, 5.0}},
                {{2.0, -7.0, 0.0}, {30.0, -4.0, 4.0}},
                {{32.0, -4.0, 0.0}, {38.0, 4.0, 6.0}}};
  spec.cylinders = {{5.0, 3.0, 0.3, 4.0}, {11.0, -3.0, 0.3, 4.0}};
  return spec;
}

SubScene make_subscene(const SceneSpec& spec, double holdout_fraction = 0.0) {
  const SyntheticScene scene(spec);
  SubScene sub;
  sub.scene_id = "street";
  sub.subscene_index = 0;
  sub.intrinsics = spec.intrinsics;
  sub.frames = scene.generate_frames();
  sub.holdout = holdout_indices(static_cast<int>(sub.frames.size()), holdout_fraction);
  return sub;
}

// Wall-only scene: every surface is fronto-parallel to the trajectory, so
// cross-frame points agree on per-pixel depth to floating-point precision.
SceneSpec wall_spec() {
  SceneSpec spec;
  spec.ground_plane = false;
  spec.intrinsics = {60.0, 60.0, 32.0, 24.0, 64, 48};
  spec.trajectory.frame_count = 4;
  spec.trajectory.spacing_m = 0.5;
  spec.trajectory.height_m = 1.5;
  spec.boxes = {{{20.0, -40.0, -40.0}, {24.0, 40.0, 40.0}}};
  return spec;
}

}  // namespace

TEST_CASE("reconstruction identity on a single-frame train split") {
  SubScene sub = make_subscene(street_spec(1));
  SplatParams params;
  params.splat_radius_px = 0;
  const RenderedView view = render_splat(sub, sub.frames[0].pose, params);
  const Frame& src = sub.frames[0];
  for (int v = 0; v < src.depth.height(); ++v) {
    for (int u = 0; u < src.depth.width(); ++u) {
      REQUIRE(view.mask.at(u, v) == src.depth.valid(u, v));
      if (src.depth.valid(u, v)) {
        REQUIRE(view.depth.valid(u, v));
        REQUIRE(std::abs(view.depth.at(u, v) - src.depth.at(u, v)) <= 1e-6);
        REQUIRE(view.rgb.at(u, v, 0) == src.rgb.at(u, v, 0));
      }
    }
  }
}

TEST_CASE("reconstruction identity holds across frames on consistent geometry") {
  SubScene sub = make_subscene(wall_spec());
  SplatParams params;
  params.splat_radius_px = 0;
  const PointCloud cloud = build_train_cloud(sub);
  for (const auto& frame : sub.frames) {
    const RenderedView view =
        render_splat_from_cloud(cloud, sub.intrinsics, frame.pose, params);
    for (int v = 0; v < frame.depth.height(); ++v) {
      for (int u = 0; u < frame.depth.width(); ++u) {
        if (!frame.depth.valid(u, v)) continue;
        REQUIRE(view.depth.valid(u, v));
        REQUIRE(std::abs(view.depth.at(u, v) - frame.depth.at(u, v)) <= 1e-6);
      }
    }
  }
}

TEST_CASE("translated novel views match the analytic oracle on covered pixels") {
  const SceneSpec spec = street_spec(8);
  const SyntheticScene scene(spec);
  SubScene sub = make_subscene(spec);
  const PointCloud cloud = build_train_cloud(sub);
  SplatParams params;
  params.splat_radius_px = 0;

  for (const double dy : {0.3, -0.3}) {
    const Pose& src = sub.frames[3].pose;
    const Pose novel(src.rotation(), src.translation() + src.rotation() * Eigen::Vector3d(dy, 0, 0));
    const RenderedView view = render_splat_from_cloud(cloud, sub.intrinsics, novel, params);
    const DepthMap oracle = scene.render_depth(novel, sub.intrinsics);
    size_t covered = 0, close = 0;
    for (int v = 0; v < oracle.height(); ++v) {
      for (int u = 0; u < oracle.width(); ++u) {
        if (!view.depth.valid(u, v) || !oracle.valid(u, v)) continue;
        ++covered;
        close += std::abs(view.depth.at(u, v) - oracle.at(u, v)) / oracle.at(u, v) <= 0.02;
      }
    }
    REQUIRE(covered > 500);
    CHECK(static_cast<double>(close) / covered >= 0.95);
  }
}

TEST_CASE("a cloud entirely behind the target camera renders empty") {
  SubScene sub = make_subscene(street_spec(2));
  // Face away from the scene: yaw by pi, placed behind the world origin.
  const Eigen::Matrix3d yaw180 =
      Eigen::AngleAxisd(std::numbers::pi, Eigen::Vector3d(0.0, -1.0, 0.0)).toRotationMatrix();
  const Pose away(sub.frames[0].pose.rotation() * yaw180,
                  sub.frames[0].pose.translation() - Eigen::Vector3d(50.0, 0.0, 0.0));
  const RenderedView view = render_splat(sub, away, SplatParams{});
  CHECK(view.depth.valid_count() == 0);
  CHECK(view.mask.set_count() == 0);
}

TEST_CASE("mask soundness and monotone coverage in the splat radius") {
  SubScene sub = make_subscene(street_spec(4));
  const PointCloud cloud = build_train_cloud(sub);
  const Pose target = interpolate_pose(sub.frames[1].pose, sub.frames[2].pose, 0.5);
  size_t previous = 0;
  for (int radius = 0; radius <= 3; ++radius) {
    SplatParams params;
    params.splat_radius_px = radius;
    const RenderedView view = render_splat_from_cloud(cloud, sub.intrinsics, target, params);
    for (int v = 0; v < view.depth.height(); ++v)
      for (int u = 0; u < view.depth.width(); ++u)
        if (view.depth.valid(u, v)) REQUIRE(view.mask.at(u, v));
    const size_t count = view.mask.set_count();
    REQUIRE(count >= previous);
    previous = count;
  }
}

TEST_CASE("splat rendering is deterministic") {
  SubScene sub = make_subscene(street_spec(4));
  SplatParams params;
  params.splat_radius_px = 1;
  const Pose target = interpolate_pose(sub.frames[0].pose, sub.frames[1].pose, 0.25);
  const RenderedView a = render_splat(sub, target, params);
  const RenderedView b = render_splat(sub, target, params);
  CHECK(a.depth == b.depth);
  CHECK(a.rgb == b.rgb);
  CHECK(a.mask == b.mask);
}

TEST_CASE("z-buffer epsilon keeps the first near-coincident point") {
  PointCloud cloud;
  cloud.points.push_back({0.0, 0.0, 3.00005});
  cloud.points.push_back({0.0, 0.0, 3.0});  // closer by less than epsilon
  cloud.points.push_back({0.0, 0.0, 5.0});
  cloud.colors = {{1.0f, 0.0f, 0.0f}, {0.0f, 1.0f, 0.0f}, {0.0f, 0.0f, 1.0f}};
  const CameraIntrinsics intr{50.0, 50.0, 4.0, 4.0, 8, 8};
  SplatParams params;
  params.splat_radius_px = 0;
  params.zbuffer_epsilon_m = 1e-4;
  const RenderedView view = render_splat_from_cloud(cloud, intr, Pose::identity(), params);
  CHECK(view.depth.at(4, 4) == 3.00005);
  CHECK(view.rgb.at(4, 4, 0) == 1.0f);

  // A point decisively closer does displace the winner.
  cloud.points.push_back({0.0, 0.0, 2.5});
  cloud.colors.push_back({0.5f, 0.5f, 0.5f});
  const RenderedView closer = render_splat_from_cloud(cloud, intr, Pose::identity(), params);
  CHECK(closer.depth.at(4, 4) == 2.5);
}

TEST_CASE("nearest point wins both depth and color") {
  PointCloud cloud;
  cloud.points.push_back({0.0, 0.0, 5.0});
  cloud.points.push_back({0.0, 0.0, 3.0});
  cloud.colors = {{1.0f, 0.0f, 0.0f}, {0.0f, 1.0f, 0.0f}};
  const CameraIntrinsics intr{50.0, 50.0, 4.0, 4.0, 8, 8};
  const RenderedView view =
      render_splat_from_cloud(cloud, intr, Pose::identity(), SplatParams{});
  CHECK(view.depth.at(4, 4) == 3.0);
  CHECK(view.rgb.at(4, 4, 1) == 1.0f);
}

TEST_CASE("render_splat rejects an empty train split") {
  SubScene sub = make_subscene(street_spec(2));
  sub.holdout = {0, 1};  // everything held out
  CHECK_THROWS_AS(build_train_cloud(sub), std::runtime_error);
}

TEST_CASE("render_external round trips splat responses bit-identically") {
  SubScene sub = make_subscene(street_spec(3));
  test::TempDir tmp("exchange");
  const std::vector<Pose> poses{sub.frames[0].pose,
                                interpolate_pose(sub.frames[0].pose, sub.frames[1].pose, 0.5)};

  // An "external tool": the splat renderer writing the response layout.
  SplatParams params;
  params.splat_radius_px = 0;
  const PointCloud cloud = build_train_cloud(sub);
  for (size_t i = 0; i < poses.size(); ++i) {
    const RenderedView view = render_splat_from_cloud(cloud, sub.intrinsics, poses[i], params);
    const auto dir = tmp.path() / std::to_string(i);
    std::filesystem::create_directories(dir);
    png_io::write_file(dir / "rgb.png", write_rgb_png(view.rgb));
    png_io::write_file(dir / "depth.png", write_depth_png(view.depth));
  }

  ExternalRenderConfig config;
  config.exchange_dir = tmp.path();
  const auto results = render_external(sub, poses, config);
  REQUIRE(results.size() == 2);
  for (size_t i = 0; i < poses.size(); ++i) {
    REQUIRE(results[i].view.has_value());
    const auto dir = tmp.path() / std::to_string(i);
    const DepthMap expected_depth = load_depth(dir / "depth.png");
    const Image expected_rgb = load_rgb(dir / "rgb.png");
    CHECK(results[i].view->depth == expected_depth);
    CHECK(results[i].view->rgb == expected_rgb);
    CHECK(results[i].view->mask == occupancy_mask(cloud, sub.intrinsics, poses[i]));
  }
  CHECK(std::filesystem::exists(tmp.path() / "request.json"));
  CHECK(std::filesystem::exists(tmp.path() / "target_poses.txt"));
  CHECK(std::filesystem::exists(tmp.path() / "calib.txt"));
}

TEST_CASE("render_external flags bad responses and keeps good ones") {
  SubScene sub = make_subscene(street_spec(3));
  test::TempDir tmp("exchange_bad");
  const std::vector<Pose> poses{sub.frames[0].pose, sub.frames[1].pose, sub.frames[2].pose};

  const PointCloud cloud = build_train_cloud(sub);
  SplatParams params;
  // Pose 0: good response. Pose 1: wrong dimensions. Pose 2: missing.
  {
    const RenderedView view =
        render_splat_from_cloud(cloud, sub.intrinsics, poses[0], params);
    const auto dir = tmp.path() / "0";
    std::filesystem::create_directories(dir);
    png_io::write_file(dir / "rgb.png", write_rgb_png(view.rgb));
    png_io::write_file(dir / "depth.png", write_depth_png(view.depth));
  }
  {
    const auto dir = tmp.path() / "1";
    std::filesystem::create_directories(dir);
    png_io::write_file(dir / "rgb.png", write_rgb_png(Image(4, 4)));
    png_io::write_file(dir / "depth.png", write_depth_png(DepthMap(4, 4)));
  }

  ExternalRenderConfig config;
  config.exchange_dir = tmp.path();
  const auto results = render_external(sub, poses, config);
  REQUIRE(results.size() == 3);
  CHECK(results[0].view.has_value());
  CHECK(!results[1].view.has_value());
  CHECK(results[1].error.find("dimensions") != std::string::npos);
  CHECK(!results[2].view.has_value());
  CHECK(!results[2].error.empty());
}

TEST_CASE("render_external with an empty exchange dir flags every pose") {
  SubScene sub = make_subscene(street_spec(2));
  test::TempDir tmp("exchange_empty");
  ExternalRenderConfig config;
  config.exchange_dir = tmp.path();
  config.timeout_sec = 0.05;  // exercise the wait path briefly
  const auto results = render_external(sub, {sub.frames[0].pose, sub.frames[1].pose}, config);
  REQUIRE(results.size() == 2);
  CHECK(!results[0].view.has_value());
  CHECK(!results[1].view.has_value());
}
