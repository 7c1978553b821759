// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

#include "rgbda/dataset_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rgbda/depth_codec.hpp"

namespace rgbda::dataset_io {

namespace fs = std::filesystem;

namespace {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::vector<double> parse_doubles(const std::string& line) {
  std::istringstream in(line);
  std::vector<double> out;
  double x;
  while (in >> x) out.push_back(x);
  return out;
}

}  // namespace

void write_poses_txt(const fs::path& path, const std::vector<Pose>& poses) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& pose : poses) {
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        out << format_double(pose.rotation()(r, c)) << ' ';
      }
      out << format_double(pose.translation()(r));
      out << (r == 2 ? '\n' : ' ');
    }
  }
}

std::vector<Pose> read_poses_txt(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<Pose> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto vals = parse_doubles(line);
    if (vals.size() != 12)
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": expected 12 numbers per pose line");
    Eigen::Matrix3d rot;
    Eigen::Vector3d t;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) rot(r, c) = vals[r * 4 + c];
      t(r) = vals[r * 4 + 3];
    }
    out.emplace_back(rot, t);
  }
  return out;
}

void write_calib_txt(const fs::path& path, const CameraIntrinsics& intr) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << format_double(intr.fx) << ' ' << format_double(intr.fy) << ' '
      << format_double(intr.cx) << ' ' << format_double(intr.cy) << ' ' << intr.width << ' '
      << intr.height << '\n';
}

CameraIntrinsics read_calib_txt(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  const auto vals = parse_doubles(line);
  if (vals.size() != 6)
    throw std::runtime_error(path.string() + ": expected 'fx fy cx cy width height'");
  CameraIntrinsics intr{vals[0], vals[1], vals[2], vals[3], static_cast<int>(vals[4]),
                        static_cast<int>(vals[5])};
  intr.validate();
  return intr;
}

void write_subscene(const fs::path& dir, const SubScene& sub) {
  fs::create_directories(dir / "rgb");
  fs::create_directories(dir / "depth");
  std::vector<Pose> poses;
  poses.reserve(sub.frames.size());
  for (const auto& f : sub.frames) {
    save_rgb(dir / "rgb" / (f.frame_id + ".png"), f.rgb);
    save_depth(dir / "depth" / (f.frame_id + ".png"), f.depth);
    poses.push_back(f.pose);
  }
  write_poses_txt(dir / "poses.txt", poses);
  write_calib_txt(dir / "calib.txt", sub.intrinsics);
  std::ofstream hold(dir / "holdout.txt", std::ios::trunc);
  for (int i : sub.holdout) hold << i << '\n';
}

std::vector<int> SubSceneMeta::train_indices() const {
  std::vector<int> out;
  out.reserve(frame_ids.size() - holdout.size());
  for (int i = 0; i < static_cast<int>(frame_ids.size()); ++i)
    if (!std::binary_search(holdout.begin(), holdout.end(), i)) out.push_back(i);
  return out;
}

SubSceneMeta read_subscene_meta(const fs::path& dir, const std::string& scene_id,
                                int subscene_index, double holdout_fraction) {
  const fs::path rgb_dir = dir / "rgb";
  if (!fs::is_directory(rgb_dir))
    throw std::runtime_error("not a sequence directory (no rgb/): " + dir.string());

  SubSceneMeta meta;
  meta.scene_id = scene_id;
  meta.subscene_index = subscene_index;
  for (const auto& entry : fs::directory_iterator(rgb_dir)) {
    if (entry.path().extension() == ".png") meta.frame_ids.push_back(entry.path().stem().string());
  }
  std::sort(meta.frame_ids.begin(), meta.frame_ids.end());
  if (meta.frame_ids.empty()) throw std::runtime_error("no frames in " + rgb_dir.string());

  meta.poses = read_poses_txt(dir / "poses.txt");
  if (meta.poses.size() != meta.frame_ids.size())
    throw std::runtime_error(dir.string() + ": poses.txt has " +
                             std::to_string(meta.poses.size()) + " lines for " +
                             std::to_string(meta.frame_ids.size()) + " frames");
  meta.intrinsics = read_calib_txt(dir / "calib.txt");

  const fs::path holdout_path = dir / "holdout.txt";
  if (fs::exists(holdout_path)) {
    std::ifstream in(holdout_path);
    int idx;
    while (in >> idx) {
      if (idx < 0 || idx >= static_cast<int>(meta.frame_ids.size()))
        throw std::runtime_error(holdout_path.string() + ": index out of range");
      meta.holdout.push_back(idx);
    }
    std::sort(meta.holdout.begin(), meta.holdout.end());
  } else {
    meta.holdout = holdout_indices(static_cast<int>(meta.frame_ids.size()), holdout_fraction);
  }
  return meta;
}

SubScene read_subscene(const fs::path& dir, const std::string& scene_id, int subscene_index,
                       double holdout_fraction) {
  SubSceneMeta meta = read_subscene_meta(dir, scene_id, subscene_index, holdout_fraction);
  SubScene sub;
  sub.scene_id = meta.scene_id;
  sub.subscene_index = meta.subscene_index;
  sub.intrinsics = meta.intrinsics;
  sub.holdout = std::move(meta.holdout);
  sub.frames.reserve(meta.frame_ids.size());
  for (size_t i = 0; i < meta.frame_ids.size(); ++i) {
    Frame f;
    f.frame_id = meta.frame_ids[i];
    f.rgb = load_rgb(dir / "rgb" / (f.frame_id + ".png"));
    f.depth = load_depth(dir / "depth" / (f.frame_id + ".png"));
    f.pose = meta.poses[i];
    sub.frames.push_back(std::move(f));
  }
  return sub;
}

Scene read_scene(const fs::path& scene_dir, const std::string& scene_id) {
  Scene scene;
  scene.scene_id = scene_id;
  bool first = true;
  for (const auto& seq : list_sequences(scene_dir)) {
    SubScene sub = read_subscene(scene_dir / seq, scene_id, 0, 0.0);
    if (first) {
      scene.intrinsics = sub.intrinsics;
      first = false;
    } else if (!(scene.intrinsics == sub.intrinsics)) {
      throw std::runtime_error(scene_dir.string() + ": sequences disagree on calibration");
    }
    for (auto& f : sub.frames) scene.frames.push_back(std::move(f));
  }
  if (scene.frames.empty())
    throw std::runtime_error("no sequences under " + scene_dir.string());
  return scene;
}

std::vector<std::string> list_scenes(const fs::path& root) {
  if (!fs::is_directory(root)) throw std::runtime_error("not a directory: " + root.string());
  std::vector<std::string> out;
  for (const auto& entry : fs::directory_iterator(root))
    if (entry.is_directory()) out.push_back(entry.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> list_sequences(const fs::path& scene_dir) {
  if (!fs::is_directory(scene_dir))
    throw std::runtime_error("not a directory: " + scene_dir.string());
  std::vector<std::string> out;
  for (const auto& entry : fs::directory_iterator(scene_dir))
    if (entry.is_directory()) out.push_back(entry.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace rgbda::dataset_io
