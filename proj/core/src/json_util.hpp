// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

// Internal JSON helpers shared by the .cpp files; not installed.
#pragma once

#include <nlohmann/json.hpp>
#include <stdexcept>

#include "rgbda/camera.hpp"
#include "rgbda/pose.hpp"

namespace rgbda::json_util {

inline nlohmann::json pose_to_json(const Pose& pose) {
  nlohmann::json row = nlohmann::json::array();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) row.push_back(pose.rotation()(r, c));
    row.push_back(pose.translation()(r));
  }
  return row;
}

inline Pose pose_from_json(const nlohmann::json& row) {
  if (!row.is_array() || row.size() != 12)
    throw std::runtime_error("pose must be 12 numbers (row-major 3x4)");
  Eigen::Matrix3d rot;
  Eigen::Vector3d t;
  size_t i = 0;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) rot(r, c) = row[i++].get<double>();
    t(r) = row[i++].get<double>();
  }
  return Pose(rot, t);
}

inline nlohmann::json intrinsics_to_json(const CameraIntrinsics& k) {
  return nlohmann::json{{"fx", k.fx}, {"fy", k.fy},         {"cx", k.cx},
                        {"cy", k.cy}, {"width", k.width},   {"height", k.height}};
}

inline CameraIntrinsics intrinsics_from_json(const nlohmann::json& j) {
  CameraIntrinsics k{j.at("fx").get<double>(), j.at("fy").get<double>(),
                     j.at("cx").get<double>(), j.at("cy").get<double>(),
                     j.at("width").get<int>(), j.at("height").get<int>()};
  k.validate();
  return k;
}

}  // namespace rgbda::json_util
