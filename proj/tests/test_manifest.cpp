// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <fstream>
#include <set>

#include "rgbda/manifest.hpp"
#include "test_support.hpp"

using namespace rgbda;

namespace {

DatasetManifest make_manifest(const std::string& prefix, int count, const std::string& origin) {
  DatasetManifest m;
  m.intrinsics.emplace("cam", CameraIntrinsics{10.0, 10.0, 5.0, 5.0, 10, 10});
  for (int i = 0; i < count; ++i) {
    ManifestRecord r;
    r.frame_id = prefix + std::to_string(i);
    r.rgb_path = "rgb/" + r.frame_id + ".png";
    r.depth_path = "depth/" + r.frame_id + ".png";
    r.intrinsics_id = "cam";
    r.origin = origin;
    r.source_frame = r.frame_id;
    r.parameter = origin == "original" ? "" : "p";
    r.subscene_id = "s/0";
    m.records.push_back(std::move(r));
  }
  return m;
}

}  // namespace

TEST_CASE("merge size law |out| = |orig| + min(cap, |pool|)") {
  const DatasetManifest original = make_manifest("o", 7, "original");
  const DatasetManifest pool = make_manifest("p", 12, "angled");
  for (const uint64_t cap : {0ull, 5ull, 12ull, 13ull, 100ull}) {
    const auto merged = merge_datasets(original, pool, MergeCap::count(cap), 9);
    CHECK(merged.records.size() == 7 + std::min<uint64_t>(cap, 12));
  }
}

TEST_CASE("merge with cap 0 returns the original records") {
  const DatasetManifest original = make_manifest("o", 3, "original");
  const DatasetManifest pool = make_manifest("p", 5, "angled");
  const auto merged = merge_datasets(original, pool, MergeCap::count(0), 1);
  REQUIRE(merged.records.size() == 3);
  for (size_t i = 0; i < 3; ++i) CHECK(merged.records[i].frame_id == original.records[i].frame_id);
}

TEST_CASE("merge sampling is seed-stable and order-preserving") {
  const DatasetManifest original = make_manifest("o", 2, "original");
  const DatasetManifest pool = make_manifest("p", 100, "angled");
  const auto a = merge_datasets(original, pool, MergeCap::count(10), 1234);
  const auto b = merge_datasets(original, pool, MergeCap::count(10), 1234);
  REQUIRE(a.records.size() == 12);
  for (size_t i = 0; i < a.records.size(); ++i)
    CHECK(a.records[i].frame_id == b.records[i].frame_id);

  // Selected pool records keep pool order.
  std::set<size_t> positions;
  for (size_t i = 2; i < a.records.size(); ++i) {
    const std::string id = a.records[i].frame_id.substr(1);
    positions.insert(std::stoul(id));
    if (i > 2) {
      CHECK(std::stoul(a.records[i].frame_id.substr(1)) >
            std::stoul(a.records[i - 1].frame_id.substr(1)));
    }
  }
  CHECK(positions.size() == 10);

  const auto c = merge_datasets(original, pool, MergeCap::count(10), 4321);
  bool any_difference = false;
  for (size_t i = 2; i < c.records.size(); ++i)
    any_difference |= c.records[i].frame_id != a.records[i].frame_id;
  CHECK(any_difference);

  // Origin tags survive the merge.
  for (size_t i = 2; i < a.records.size(); ++i) CHECK(a.records[i].origin == "angled");
  CHECK(a.seed == 1234);
}

TEST_CASE("percentage caps resolve against the original count") {
  const DatasetManifest original = make_manifest("o", 10, "original");
  const DatasetManifest pool = make_manifest("p", 100, "angled");
  const auto merged = merge_datasets(original, pool, MergeCap::percent(50.0), 7);
  CHECK(merged.records.size() == 15);  // 10 + 50% of 10
}

TEST_CASE("manifest json round trip is lossless") {
  std::mt19937_64 engine(77);
  DatasetManifest m = make_manifest("x", 4, "translate-vertical");
  for (auto& r : m.records) r.pose = test::random_pose(engine);
  m.records[2].mask_path = "mask/x2.png";
  m.seed = 555;

  const std::string text = m.to_json_string();
  const DatasetManifest back = DatasetManifest::from_json_string(text);
  CHECK(back.to_json_string() == text);
  REQUIRE(back.records.size() == m.records.size());
  for (size_t i = 0; i < m.records.size(); ++i) {
    CHECK(back.records[i].pose.rotation() == m.records[i].pose.rotation());
    CHECK(back.records[i].pose.translation() == m.records[i].pose.translation());
    CHECK(back.records[i].mask_path == m.records[i].mask_path);
  }
  CHECK(back.seed == 555);
  CHECK(back.intrinsics.at("cam") == m.intrinsics.at("cam"));
}

TEST_CASE("validation reports duplicates, missing files, and unknown intrinsics") {
  test::TempDir tmp("manifest");
  DatasetManifest m = make_manifest("v", 2, "original");
  // Materialize only the first record's files.
  std::filesystem::create_directories(tmp.path() / "rgb");
  std::filesystem::create_directories(tmp.path() / "depth");
  std::ofstream(tmp.path() / "rgb/v0.png") << "x";
  std::ofstream(tmp.path() / "depth/v0.png") << "x";

  CHECK_THROWS_WITH_AS(m.validate(tmp.path()), doctest::Contains("missing file"),
                       std::runtime_error);

  std::ofstream(tmp.path() / "rgb/v1.png") << "x";
  std::ofstream(tmp.path() / "depth/v1.png") << "x";
  CHECK_NOTHROW(m.validate(tmp.path()));

  DatasetManifest dup = m;
  dup.records.push_back(dup.records[0]);
  CHECK_THROWS_WITH_AS(dup.validate(tmp.path()), doctest::Contains("duplicate provenance"),
                       std::runtime_error);

  DatasetManifest unknown = m;
  unknown.records[0].intrinsics_id = "nope";
  CHECK_THROWS_WITH_AS(unknown.validate(tmp.path()), doctest::Contains("unknown intrinsics"),
                       std::runtime_error);
}

TEST_CASE("merge rejects conflicting intrinsics tables") {
  DatasetManifest original = make_manifest("o", 1, "original");
  DatasetManifest pool = make_manifest("p", 1, "angled");
  pool.intrinsics.at("cam").fx = 99.0;
  CHECK_THROWS_AS(merge_datasets(original, pool, MergeCap::count(1), 0), std::invalid_argument);
}
