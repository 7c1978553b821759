// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>

#include "rgbda/dataset_io.hpp"
#include "rgbda/depth_codec.hpp"
#include "rgbda/png_io.hpp"
#include "test_support.hpp"

using namespace rgbda;

namespace fs = std::filesystem;

TEST_CASE("stored value 25600 decodes to 100 meters") {
  png_io::Gray16 raw{2, 2, {0, 256, 25600, 65535}};
  const DepthMap depth = read_depth_png(png_io::encode_gray16(raw));
  CHECK(!depth.valid(0, 0));  // sentinel
  CHECK(depth.at(1, 0) == 1.0);
  CHECK(depth.at(0, 1) == 100.0);
  CHECK(depth.at(1, 1) == 65535.0 / 256.0);
}

TEST_CASE("write is the exact inverse with rounding and saturation") {
  DepthMap depth(3, 1);
  depth.set(0, 0, 100.0);
  depth.set(1, 0, 1.0 + 0.6 / 256.0);  // rounds up
  depth.set(2, 0, 300.0);              // saturates
  const png_io::Gray16 raw = png_io::decode_gray16(write_depth_png(depth));
  CHECK(raw.values[0] == 25600);
  CHECK(raw.values[1] == 257);
  CHECK(raw.values[2] == 65535);
}

TEST_CASE("depth png round trips byte-for-byte") {
  std::mt19937_64 engine(404);
  png_io::Gray16 raw{31, 17, {}};
  raw.values.resize(31 * 17);
  for (auto& v : raw.values) v = static_cast<uint16_t>(rng::bounded(engine, 65536));
  const auto bytes = png_io::encode_gray16(raw);
  const auto rewritten = write_depth_png(read_depth_png(bytes));
  CHECK(bytes == rewritten);
}

TEST_CASE("decode-encode is the identity on quantized depth maps") {
  std::mt19937_64 engine(405);
  DepthMap depth(9, 7);
  for (int v = 0; v < 7; ++v)
    for (int u = 0; u < 9; ++u)
      if (rng::unit(engine) < 0.6)
        depth.set(u, v, static_cast<double>(1 + rng::bounded(engine, 60000)) / 256.0);
  CHECK(read_depth_png(write_depth_png(depth)) == depth);
}

TEST_CASE("depth decoder rejects non-16-bit and multi-channel input") {
  png_io::Rgb8 rgb{2, 2, std::vector<uint8_t>(12, 7)};
  CHECK_THROWS_AS(read_depth_png(png_io::encode_rgb8(rgb)), std::runtime_error);
  png_io::Gray8 gray{2, 2, std::vector<uint8_t>(4, 7)};
  CHECK_THROWS_AS(read_depth_png(png_io::encode_gray8(gray)), std::runtime_error);
  const std::vector<uint8_t> garbage{1, 2, 3, 4};
  CHECK_THROWS_AS(read_depth_png(garbage), std::runtime_error);
}

TEST_CASE("golden depth files decode to frozen values and re-encode identically") {
  const fs::path dir = fs::path(RGBDA_TEST_DATA_DIR) / "golden";
  struct Golden {
    const char* name;
    int u, v;
    double meters;
  };
  // One probe value per file; 0 means invalid.
  const Golden cases[] = {
      {"depth_100m.png", 1, 1, 100.0},
      {"depth_ramp.png", 3, 0, 4.0 / 256.0},
      {"depth_sparse.png", 0, 0, 0.0},
  };
  for (const auto& c : cases) {
    const auto bytes = png_io::read_file(dir / c.name);
    const DepthMap depth = read_depth_png(bytes);
    if (c.meters == 0.0) {
      CHECK(!depth.valid(c.u, c.v));
    } else {
      CHECK(depth.at(c.u, c.v) == c.meters);
    }
    CHECK(write_depth_png(depth) == bytes);
  }
}

TEST_CASE("rgb images round trip through 8-bit quantization") {
  Image img(5, 4);
  for (int v = 0; v < 4; ++v)
    for (int u = 0; u < 5; ++u)
      img.set_rgb(u, v, (u * 4 + v) / 255.0f, (u * 11) / 255.0f, (v * 37) / 255.0f);
  const Image back = read_rgb_png(write_rgb_png(img));
  CHECK(back == img);
}

TEST_CASE("mask png round trip") {
  OccupancyMask mask(6, 3);
  mask.set(0, 0);
  mask.set(5, 2);
  mask.set(3, 1);
  CHECK(read_mask_png(write_mask_png(mask)) == mask);
}

TEST_CASE("poses.txt preserves doubles bit-for-bit") {
  std::mt19937_64 engine(406);
  std::vector<Pose> poses;
  for (int i = 0; i < 12; ++i) poses.push_back(test::random_pose(engine));
  test::TempDir tmp("poses");
  dataset_io::write_poses_txt(tmp.path() / "poses.txt", poses);
  const auto back = dataset_io::read_poses_txt(tmp.path() / "poses.txt");
  REQUIRE(back.size() == poses.size());
  for (size_t i = 0; i < poses.size(); ++i) {
    CHECK(back[i].rotation() == poses[i].rotation());
    CHECK(back[i].translation() == poses[i].translation());
  }
}

TEST_CASE("calib.txt round trip") {
  const CameraIntrinsics intr{721.5377, 721.5377, 609.5593, 172.854, 1242, 375};
  test::TempDir tmp("calib");
  dataset_io::write_calib_txt(tmp.path() / "calib.txt", intr);
  CHECK(dataset_io::read_calib_txt(tmp.path() / "calib.txt") == intr);
}

TEST_CASE("sub-scene directory round trip") {
  std::mt19937_64 engine(407);
  SubScene sub;
  sub.scene_id = "s";
  sub.subscene_index = 2;
  sub.intrinsics = {40.0, 40.0, 16.0, 12.0, 32, 24};
  for (int i = 0; i < 5; ++i) {
    Frame f;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%06d", i);
    f.frame_id = buf;
    f.rgb = Image(32, 24);
    for (int v = 0; v < 24; ++v)
      for (int u = 0; u < 32; ++u)
        f.rgb.set_rgb(u, v, ((u + v + i) % 256) / 255.0f, (u % 256) / 255.0f, (v % 256) / 255.0f);
    f.depth = DepthMap(32, 24);
    for (int v = 0; v < 24; ++v)
      for (int u = 0; u < 32; ++u)
        if (rng::unit(engine) < 0.5)
          f.depth.set(u, v, static_cast<double>(1 + rng::bounded(engine, 20000)) / 256.0);
    f.pose = test::random_pose(engine);
    sub.frames.push_back(std::move(f));
  }
  sub.holdout = {2};

  test::TempDir tmp("subscene");
  dataset_io::write_subscene(tmp.path(), sub);
  const SubScene back = dataset_io::read_subscene(tmp.path(), "s", 2, 0.10);

  REQUIRE(back.frames.size() == sub.frames.size());
  CHECK(back.intrinsics == sub.intrinsics);
  CHECK(back.holdout == sub.holdout);
  for (size_t i = 0; i < sub.frames.size(); ++i) {
    CHECK(back.frames[i].frame_id == sub.frames[i].frame_id);
    CHECK(back.frames[i].rgb == sub.frames[i].rgb);
    CHECK(back.frames[i].depth == sub.frames[i].depth);
    CHECK(back.frames[i].pose.rotation() == sub.frames[i].pose.rotation());
    CHECK(back.frames[i].pose.translation() == sub.frames[i].pose.translation());
  }

  const auto meta = dataset_io::read_subscene_meta(tmp.path(), "s", 2, 0.10);
  CHECK(meta.frame_ids.size() == 5);
  CHECK(meta.holdout == sub.holdout);
  CHECK(meta.train_indices() == std::vector<int>{0, 1, 3, 4});
}
