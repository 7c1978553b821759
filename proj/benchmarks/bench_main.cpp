// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <random>

#include "rgbda/geometry.hpp"
#include "rgbda/metrics.hpp"
#include "rgbda/quality.hpp"
#include "rgbda/renderer.hpp"
#include "rgbda/rng.hpp"
#include "rgbda/synthetic.hpp"

namespace {

using namespace rgbda;

SceneSpec bench_scene() {
  SceneSpec spec;
  spec.intrinsics = {160.0, 160.0, 80.0, 60.0, 160, 120};
  spec.trajectory.frame_count = 8;
  spec.trajectory.spacing_m = 0.5;
  spec.trajectory.height_m = 1.6;
  spec.boxes = {{{0.0, 5.0, 0.0}, {40.0, 8.0, 6.0}},
                {{0.0, -8.0, 0.0}, {40.0, -5.0, 5.0}},
                {{44.0, -3.0, 0.0}, {50.0, 3.0, 7.0}}};
  spec.cylinders = {{6.0, 3.0, 0.3, 4.0}, {14.0, -3.0, 0.3, 4.0}};
  return spec;
}

SubScene bench_subscene() {
  const SyntheticScene scene(bench_scene());
  SubScene sub;
  sub.scene_id = "bench";
  sub.intrinsics = bench_scene().intrinsics;
  sub.frames = scene.generate_frames();
  sub.holdout = holdout_indices(static_cast<int>(sub.frames.size()), 0.10);
  return sub;
}

void BM_Unproject(benchmark::State& state) {
  const SyntheticScene scene(bench_scene());
  const auto poses = scene.trajectory_poses();
  const DepthMap depth = scene.render_depth(poses[0], bench_scene().intrinsics);
  for (auto _ : state) {
    benchmark::DoNotOptimize(unproject(depth, bench_scene().intrinsics, poses[0]));
  }
}
BENCHMARK(BM_Unproject);

void BM_Project(benchmark::State& state) {
  const SyntheticScene scene(bench_scene());
  const auto poses = scene.trajectory_poses();
  const DepthMap depth = scene.render_depth(poses[0], bench_scene().intrinsics);
  const PointCloud cloud = unproject(depth, bench_scene().intrinsics, poses[0]);
  for (auto _ : state) {
    benchmark::DoNotOptimize(project(cloud, bench_scene().intrinsics, poses[1]));
  }
}
BENCHMARK(BM_Project);

void BM_RenderSplat(benchmark::State& state) {
  const SubScene sub = bench_subscene();
  const PointCloud cloud = build_train_cloud(sub);
  SplatParams params;
  params.splat_radius_px = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        render_splat_from_cloud(cloud, sub.intrinsics, sub.frames[3].pose, params));
  }
}
BENCHMARK(BM_RenderSplat)->Arg(0)->Arg(1)->Arg(2);

void BM_ReferencePerceptual(benchmark::State& state) {
  const SyntheticScene scene(bench_scene());
  const auto poses = scene.trajectory_poses();
  const Image a = scene.render_rgb(poses[0], bench_scene().intrinsics);
  const Image b = scene.render_rgb(poses[1], bench_scene().intrinsics);
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference_perceptual(a, b));
  }
}
BENCHMARK(BM_ReferencePerceptual);

void BM_Evaluate(benchmark::State& state) {
  const SyntheticScene scene(bench_scene());
  const auto poses = scene.trajectory_poses();
  const DepthMap gt = scene.render_depth(poses[0], bench_scene().intrinsics);
  DepthMap pred = gt;
  std::mt19937_64 engine(1);
  for (int v = 0; v < pred.height(); ++v) {
    for (int u = 0; u < pred.width(); ++u) {
      if (pred.valid(u, v)) pred.set(u, v, pred.at(u, v) * (1.0 + rng::symmetric(engine, 0.02)));
    }
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(pred, gt));
  }
}
BENCHMARK(BM_Evaluate);

}  // namespace

BENCHMARK_MAIN();
