// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "rgbda/synthetic.hpp"
#include "test_support.hpp"

using namespace rgbda;

namespace {

SceneSpec ground_only_spec() {
  SceneSpec spec;
  spec.ground_plane = true;
  spec.intrinsics = {100.0, 100.0, 50.0, 40.0, 100, 80};
  spec.trajectory.frame_count = 3;
  spec.trajectory.spacing_m = 1.0;
  spec.trajectory.height_m = 2.0;
  spec.max_range_m = 500.0;
  return spec;
}

}  // namespace

TEST_CASE("ground plane depth follows d = h * fy / (v - cy)") {
  const SceneSpec spec = ground_only_spec();
  const SyntheticScene scene(spec);
  const auto poses = scene.trajectory_poses();
  const DepthMap depth = scene.render_depth(poses[0], spec.intrinsics);
  for (int v = 0; v < spec.intrinsics.height; ++v) {
    for (int u = 0; u < spec.intrinsics.width; ++u) {
      if (v <= spec.intrinsics.cy) {
        CHECK(!depth.valid(u, v));  // horizon and sky
        continue;
      }
      const double expected = spec.trajectory.height_m * spec.intrinsics.fy /
                              (v - spec.intrinsics.cy);
      if (expected > spec.max_range_m || expected < spec.min_range_m) {
        CHECK(!depth.valid(u, v));
      } else {
        REQUIRE(depth.valid(u, v));
        REQUIRE(depth.at(u, v) == doctest::Approx(expected).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("box face straight ahead returns the exact slab distance") {
  SceneSpec spec = ground_only_spec();
  spec.boxes.push_back(Box{{20.0, -5.0, 0.0}, {30.0, 5.0, 10.0}});
  const SyntheticScene scene(spec);
  const auto poses = scene.trajectory_poses();
  // Center pixel ray is the optical axis; camera starts at x = 0.
  const DepthMap depth = scene.render_depth(poses[0], spec.intrinsics);
  CHECK(depth.at(50, 40) == doctest::Approx(20.0).epsilon(1e-12));
}

TEST_CASE("cylinder straight ahead returns center distance minus radius") {
  SceneSpec spec = ground_only_spec();
  spec.cylinders.push_back(Cylinder{15.0, 0.0, 0.5, 10.0});
  const SyntheticScene scene(spec);
  const auto poses = scene.trajectory_poses();
  const DepthMap depth = scene.render_depth(poses[0], spec.intrinsics);
  CHECK(depth.at(50, 40) == doctest::Approx(14.5).epsilon(1e-12));
}

TEST_CASE("rays that miss every primitive are invalid and black") {
  SceneSpec spec = ground_only_spec();
  const SyntheticScene scene(spec);
  const auto poses = scene.trajectory_poses();
  const DepthMap depth = scene.render_depth(poses[0], spec.intrinsics);
  const Image rgb = scene.render_rgb(poses[0], spec.intrinsics);
  CHECK(!depth.valid(50, 0));  // sky pixel
  CHECK(rgb.at(50, 0, 0) == 0.0f);
  CHECK(rgb.at(50, 0, 1) == 0.0f);
  CHECK(rgb.at(50, 0, 2) == 0.0f);
}

TEST_CASE("same spec and seed produce bit-identical frames") {
  SceneSpec spec = ground_only_spec();
  spec.boxes.push_back(Box{{10.0, 2.0, 0.0}, {18.0, 6.0, 4.0}});
  spec.trajectory.lateral_jitter_m = 0.2;
  spec.seed = 99;
  const auto frames_a = SyntheticScene(spec).generate_frames();
  const auto frames_b = SyntheticScene(spec).generate_frames();
  REQUIRE(frames_a.size() == frames_b.size());
  for (size_t i = 0; i < frames_a.size(); ++i) {
    CHECK(frames_a[i].depth == frames_b[i].depth);
    CHECK(frames_a[i].rgb == frames_b[i].rgb);
    CHECK(frames_a[i].pose.translation() == frames_b[i].pose.translation());
  }
}

TEST_CASE("generated frame depth equals the oracle bit-for-bit when dense") {
  SceneSpec spec = ground_only_spec();
  spec.boxes.push_back(Box{{12.0, -4.0, 0.0}, {20.0, 4.0, 5.0}});
  const SyntheticScene scene(spec);
  const auto frames = scene.generate_frames();
  const auto poses = scene.trajectory_poses();
  for (size_t i = 0; i < frames.size(); ++i) {
    CHECK(frames[i].depth == scene.render_depth(poses[i], spec.intrinsics));
    CHECK(frames[i].rgb == scene.render_rgb(poses[i], spec.intrinsics));
  }
}

TEST_CASE("row sparsification keeps every k-th row") {
  SceneSpec spec = ground_only_spec();
  spec.sparsify_row_step = 4;
  const SyntheticScene scene(spec);
  const auto frames = scene.generate_frames();
  const DepthMap dense = scene.render_depth(scene.trajectory_poses()[0], spec.intrinsics);
  for (int v = 0; v < spec.intrinsics.height; ++v) {
    for (int u = 0; u < spec.intrinsics.width; ++u) {
      if (v % 4 == 0) {
        CHECK(frames[0].depth.valid(u, v) == dense.valid(u, v));
      } else {
        CHECK(!frames[0].depth.valid(u, v));
      }
    }
  }
}

TEST_CASE("arc trajectory turns while staying at height") {
  SceneSpec spec = ground_only_spec();
  spec.trajectory.path = TrajectorySpec::Path::kArc;
  spec.trajectory.arc_radius_m = 20.0;
  spec.trajectory.frame_count = 10;
  const auto poses = SyntheticScene(spec).trajectory_poses();
  for (const auto& p : poses) CHECK(p.translation().z() == doctest::Approx(2.0));
  // Heading rotates by spacing/radius per frame.
  const Eigen::Vector3d f0 = poses[0].rotation().col(2);
  const Eigen::Vector3d f9 = poses[9].rotation().col(2);
  const double expected_turn = 9 * spec.trajectory.spacing_m / spec.trajectory.arc_radius_m;
  CHECK(std::acos(f0.dot(f9)) == doctest::Approx(expected_turn).epsilon(1e-9));
}

TEST_CASE("degenerate specs are rejected") {
  SceneSpec no_primitives;
  no_primitives.ground_plane = false;
  no_primitives.intrinsics = {10.0, 10.0, 5.0, 5.0, 10, 10};
  CHECK_THROWS_AS(SyntheticScene{no_primitives}, std::invalid_argument);

  SceneSpec below_ground = ground_only_spec();
  below_ground.trajectory.height_m = -1.0;
  CHECK_THROWS_AS(SyntheticScene{below_ground}, std::invalid_argument);

  SceneSpec bad_box = ground_only_spec();
  bad_box.boxes.push_back(Box{{1.0, 1.0, 1.0}, {0.0, 2.0, 2.0}});
  CHECK_THROWS_AS(SyntheticScene{bad_box}, std::invalid_argument);
}
