// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace rgbda {

/// Rigid body transform mapping the camera frame to the world frame.
/// Camera convention: x right, y down, z forward (optical axis).
class Pose {
 public:
  Pose() : rotation_(Eigen::Matrix3d::Identity()), translation_(Eigen::Vector3d::Zero()) {}

  /// Throws std::invalid_argument unless `rotation` is a proper rotation
  /// (orthonormal with unit determinant, checked to 1e-9 elementwise).
  Pose(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation);

  static Pose identity() { return Pose(); }

  const Eigen::Matrix3d& rotation() const { return rotation_; }
  const Eigen::Vector3d& translation() const { return translation_; }

  /// Camera-frame point to world frame.
  Eigen::Vector3d transform(const Eigen::Vector3d& p) const {
    return rotation_ * p + translation_;
  }

  Pose inverse() const;

  /// Composition: (a * b).transform(p) == a.transform(b.transform(p)).
  Pose operator*(const Pose& other) const;

  bool isApprox(const Pose& other, double tol = 1e-12) const {
    return rotation_.isApprox(other.rotation_, tol) &&
           (translation_ - other.translation_).norm() <= tol;
  }

 private:
  struct Unchecked {};
  Pose(Unchecked, const Eigen::Matrix3d& r, const Eigen::Vector3d& t)
      : rotation_(r), translation_(t) {}

  Eigen::Matrix3d rotation_;
  Eigen::Vector3d translation_;
};

/// Slerp on rotation (shorter arc) with linear translation, s in [0, 1].
/// s = 0 yields `a`, s = 1 yields `b`; s outside [0, 1] throws.
Pose interpolate_pose(const Pose& a, const Pose& b, double s);

}  // namespace rgbda
