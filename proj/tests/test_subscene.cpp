// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "rgbda/subscene.hpp"
#include "test_support.hpp"

using namespace rgbda;

namespace {

Frame frame_at(double x, double y, double z, const std::string& id) {
  Frame f;
  f.frame_id = id;
  f.rgb = Image(4, 4);
  f.depth = DepthMap(4, 4);
  f.pose = Pose(Eigen::Matrix3d::Identity(), {x, y, z});
  return f;
}

Scene line_scene(const std::vector<double>& xs) {
  Scene scene;
  scene.scene_id = "line";
  scene.intrinsics = {2.0, 2.0, 2.0, 2.0, 4, 4};
  char buf[16];
  for (size_t i = 0; i < xs.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%04zu", i);
    scene.frames.push_back(frame_at(xs[i], 0.0, 0.0, buf));
  }
  return scene;
}

}  // namespace

TEST_CASE("all poses within range yield a single sub-scene") {
  const auto subs = split_scene(line_scene({0.0, 10.0, 25.0, 49.9}), 50.0, 0.10);
  REQUIRE(subs.size() == 1);
  CHECK(subs[0].frames.size() == 4);
  CHECK(subs[0].subscene_index == 0);
}

TEST_CASE("greedy split at 0/30/60/90 meters") {
  const auto subs = split_scene(line_scene({0.0, 30.0, 60.0, 90.0}), 50.0, 0.10);
  REQUIRE(subs.size() == 2);
  CHECK(subs[0].frames.size() == 2);  // 0, 30
  CHECK(subs[1].frames.size() == 2);  // 60 (new anchor), 90 within 30 m of it
  CHECK(subs[0].frames[0].frame_id == "0000");
  CHECK(subs[1].frames[0].frame_id == "0002");
  CHECK(subs[1].subscene_index == 1);
}

TEST_CASE("ten frames hold out exactly one at the default fraction") {
  std::vector<double> xs(10);
  for (int i = 0; i < 10; ++i) xs[i] = i * 1.0;
  const auto subs = split_scene(line_scene(xs), 50.0, 0.10);
  REQUIRE(subs.size() == 1);
  CHECK(subs[0].holdout.size() == 1);
}

TEST_CASE("holdout counts follow round(n * fraction) with the minimum rule") {
  CHECK(holdout_indices(1, 0.10).empty());
  CHECK(holdout_indices(2, 0.10).size() == 1);
  CHECK(holdout_indices(10, 0.10).size() == 1);
  CHECK(holdout_indices(15, 0.10).size() == 2);  // round(1.5)
  CHECK(holdout_indices(100, 0.10).size() == 10);
  CHECK(holdout_indices(5, 0.0).empty());

  for (int n = 2; n <= 200; ++n) {
    const auto idx = holdout_indices(n, 0.10);
    const long expected = std::clamp(std::lround(n * 0.10), 1L, static_cast<long>(n) - 1);
    REQUIRE(idx.size() == static_cast<size_t>(expected));
    for (size_t j = 0; j < idx.size(); ++j) {
      REQUIRE(idx[j] >= 0);
      REQUIRE(idx[j] < n);
      if (j > 0) REQUIRE(idx[j] > idx[j - 1]);
    }
  }
}

TEST_CASE("split partitions random trajectories in order") {
  std::mt19937_64 engine(101);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 5 + static_cast<int>(rng::bounded(engine, 80));
    std::vector<double> xs(n);
    double x = 0.0;
    for (int i = 0; i < n; ++i) {
      x += rng::unit(engine) * 12.0;
      xs[i] = x;
    }
    Scene scene = line_scene(xs);
    const size_t total = scene.frames.size();
    const auto subs = split_scene(std::move(scene), 50.0, 0.10);

    size_t count = 0;
    int expected_index = 0;
    int frame_counter = 0;
    char buf[16];
    for (const auto& sub : subs) {
      REQUIRE(sub.subscene_index == expected_index++);
      REQUIRE(!sub.frames.empty());
      const Eigen::Vector3d anchor = sub.anchor_pose().translation();
      for (const auto& f : sub.frames) {
        std::snprintf(buf, sizeof(buf), "%04d", frame_counter++);
        REQUIRE(f.frame_id == buf);  // order preserved across the partition
        REQUIRE((f.pose.translation() - anchor).norm() <= 50.0);
      }
      // Holdout is a strict subset with in-range indices.
      REQUIRE(sub.holdout.size() < sub.frames.size());
      if (sub.frames.size() >= 2) REQUIRE(!sub.holdout.empty());
      count += sub.frames.size();

      // Idempotence: a compliant sub-scene does not split further.
      Scene again;
      again.scene_id = "again";
      again.intrinsics = sub.intrinsics;
      again.frames = sub.frames;
      REQUIRE(split_scene(std::move(again), 50.0, 0.10).size() == 1);
    }
    REQUIRE(count == total);
  }
}

TEST_CASE("train and holdout indices partition the frames") {
  std::vector<double> xs(20);
  for (int i = 0; i < 20; ++i) xs[i] = i * 0.5;
  const auto subs = split_scene(line_scene(xs), 50.0, 0.10);
  REQUIRE(subs.size() == 1);
  const auto& sub = subs[0];
  CHECK(sub.holdout.size() == 2);
  const auto train = sub.train_indices();
  CHECK(train.size() + sub.holdout.size() == sub.frames.size());
  for (int idx : sub.holdout) CHECK(sub.is_holdout(idx));
  for (int idx : train) CHECK(!sub.is_holdout(idx));
}

TEST_CASE("split rejects empty input") {
  CHECK_THROWS_AS(split_scene(Scene{}, 50.0, 0.10), std::invalid_argument);
}
