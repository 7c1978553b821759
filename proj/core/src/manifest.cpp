// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

#include "rgbda/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <nlohmann/json.hpp>

#include "json_util.hpp"
#include "rgbda/rng.hpp"

namespace rgbda {

using nlohmann::json;
using json_util::intrinsics_from_json;
using json_util::intrinsics_to_json;
using json_util::pose_from_json;
using json_util::pose_to_json;

std::string DatasetManifest::to_json_string() const {
  json j;
  j["seed"] = seed;
  json table = json::object();
  for (const auto& [id, k] : intrinsics) table[id] = intrinsics_to_json(k);
  j["intrinsics"] = table;
  json recs = json::array();
  for (const auto& r : records) {
    json jr{{"frame_id", r.frame_id},
            {"rgb", r.rgb_path},
            {"depth", r.depth_path},
            {"pose", pose_to_json(r.pose)},
            {"intrinsics_id", r.intrinsics_id},
            {"origin", r.origin},
            {"source_frame", r.source_frame},
            {"parameter", r.parameter},
            {"subscene_id", r.subscene_id}};
    if (!r.mask_path.empty()) jr["mask"] = r.mask_path;
    recs.push_back(std::move(jr));
  }
  j["records"] = recs;
  return j.dump(2) + "\n";
}

DatasetManifest DatasetManifest::from_json_string(const std::string& text) {
  const json j = json::parse(text);
  DatasetManifest m;
  m.seed = j.value("seed", uint64_t{0});
  if (j.contains("intrinsics")) {
    for (const auto& [id, jk] : j.at("intrinsics").items())
      m.intrinsics.emplace(id, intrinsics_from_json(jk));
  }
  for (const auto& jr : j.at("records")) {
    ManifestRecord r;
    r.frame_id = jr.at("frame_id").get<std::string>();
    r.rgb_path = jr.at("rgb").get<std::string>();
    r.depth_path = jr.at("depth").get<std::string>();
    r.mask_path = jr.value("mask", "");
    r.pose = pose_from_json(jr.at("pose"));
    r.intrinsics_id = jr.at("intrinsics_id").get<std::string>();
    r.origin = jr.at("origin").get<std::string>();
    r.source_frame = jr.value("source_frame", "");
    r.parameter = jr.value("parameter", "");
    r.subscene_id = jr.value("subscene_id", "");
    m.records.push_back(std::move(r));
  }
  return m;
}

void DatasetManifest::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write manifest: " + path.string());
  out << to_json_string();
}

DatasetManifest DatasetManifest::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json_string(buffer.str());
}

void DatasetManifest::validate(const std::filesystem::path& base_dir) const {
  std::vector<std::string> problems;
  std::set<std::tuple<std::string, std::string, std::string>> triples;
  for (const auto& r : records) {
    if (!triples.emplace(r.origin, r.source_frame, r.parameter).second) {
      problems.push_back("duplicate provenance triple: (" + r.origin + ", " + r.source_frame +
                         ", " + r.parameter + ")");
    }
    if (!intrinsics.count(r.intrinsics_id))
      problems.push_back(r.frame_id + ": unknown intrinsics id " + r.intrinsics_id);
    for (const std::string* p : {&r.rgb_path, &r.depth_path, &r.mask_path}) {
      if (p->empty()) continue;
      if (!std::filesystem::exists(base_dir / *p))
        problems.push_back(r.frame_id + ": missing file " + *p);
    }
  }
  if (!problems.empty()) {
    std::string msg = "manifest validation failed:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw std::runtime_error(msg);
  }
}

uint64_t MergeCap::resolve(size_t original_count) const {
  if (value < 0.0) throw std::invalid_argument("merge cap must be non-negative");
  if (kind == Kind::kCount) return static_cast<uint64_t>(value);
  return static_cast<uint64_t>(std::llround(original_count * value / 100.0));
}

DatasetManifest merge_datasets(const DatasetManifest& original, const DatasetManifest& pool,
                               const MergeCap& cap, uint64_t seed) {
  const uint64_t want = cap.resolve(original.records.size());
  const size_t take = static_cast<size_t>(std::min<uint64_t>(want, pool.records.size()));

  // Partial Fisher-Yates over pool indices, then restored to pool order.
  std::vector<size_t> indices(pool.records.size());
  for (size_t i = 0; i < indices.size(); ++i) indices[i] = i;
  std::mt19937_64 engine(seed);
  for (size_t i = 0; i < take; ++i) {
    const size_t j = i + static_cast<size_t>(rng::bounded(engine, indices.size() - i));
    std::swap(indices[i], indices[j]);
  }
  indices.resize(take);
  std::sort(indices.begin(), indices.end());

  DatasetManifest out = original;
  out.seed = seed;
  for (const auto& [id, k] : pool.intrinsics) {
    auto [it, inserted] = out.intrinsics.emplace(id, k);
    if (!inserted && !(it->second == k))
      throw std::invalid_argument("merge: conflicting intrinsics for id " + id);
  }
  for (size_t i : indices) out.records.push_back(pool.records[i]);
  return out;
}

}  // namespace rgbda
