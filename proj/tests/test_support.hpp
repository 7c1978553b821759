// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <random>
#include <string>

#include "rgbda/image.hpp"
#include "rgbda/pose.hpp"
#include "rgbda/rng.hpp"

namespace rgbda::test {

inline Pose random_pose(std::mt19937_64& engine, double translation_range = 10.0) {
  Eigen::Vector3d axis(rng::symmetric(engine, 1.0), rng::symmetric(engine, 1.0),
                       rng::symmetric(engine, 1.0));
  if (axis.norm() < 1e-6) axis = Eigen::Vector3d::UnitZ();
  axis.normalize();
  const double angle = rng::symmetric(engine, 3.14159);
  Eigen::Vector3d t;
  for (int i = 0; i < 3; ++i) t[i] = rng::symmetric(engine, translation_range);
  return Pose(Eigen::AngleAxisd(angle, axis).toRotationMatrix(), t);
}

/// Sparse random depth map; roughly `fill` of the pixels valid.
inline DepthMap random_sparse_depth(std::mt19937_64& engine, int width, int height,
                                    double fill = 0.4, double min_d = 0.5, double max_d = 60.0) {
  DepthMap out(width, height);
  for (int v = 0; v < height; ++v) {
    for (int u = 0; u < width; ++u) {
      if (rng::unit(engine) >= fill) continue;
      out.set(u, v, min_d + rng::unit(engine) * (max_d - min_d));
    }
  }
  return out;
}

inline Image random_image(std::mt19937_64& engine, int width, int height) {
  Image out(width, height);
  for (int v = 0; v < height; ++v)
    for (int u = 0; u < width; ++u)
      out.set_rgb(u, v, static_cast<float>(rng::unit(engine)),
                  static_cast<float>(rng::unit(engine)), static_cast<float>(rng::unit(engine)));
  return out;
}

/// Unique scratch directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("rgbda_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace rgbda::test
