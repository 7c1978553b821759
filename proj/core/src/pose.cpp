// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

#include "rgbda/pose.hpp"

#include <cmath>
#include <stdexcept>

namespace rgbda {

namespace {
constexpr double kRotationTol = 1e-9;
}

Pose::Pose(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation)
    : rotation_(rotation), translation_(translation) {
  const Eigen::Matrix3d gram = rotation * rotation.transpose();
  if (!gram.isApprox(Eigen::Matrix3d::Identity(), kRotationTol) ||
      std::abs(rotation.determinant() - 1.0) > kRotationTol) {
    throw std::invalid_argument("pose: rotation is not a proper rotation matrix");
  }
  if (!translation.allFinite())
    throw std::invalid_argument("pose: translation must be finite");
}

Pose Pose::inverse() const {
  const Eigen::Matrix3d rt = rotation_.transpose();
  return Pose(Unchecked{}, rt, -(rt * translation_));
}

Pose Pose::operator*(const Pose& other) const {
  return Pose(Unchecked{}, rotation_ * other.rotation_,
              rotation_ * other.translation_ + translation_);
}

Pose interpolate_pose(const Pose& a, const Pose& b, double s) {
  if (!(s >= 0.0 && s <= 1.0))
    throw std::invalid_argument("interpolate_pose: s must lie in [0, 1]");
  // Endpoints returned verbatim so they are exact, not merely close.
  if (s == 0.0) return a;
  if (s == 1.0) return b;
  Eigen::Quaterniond qa(a.rotation());
  Eigen::Quaterniond qb(b.rotation());
  const Eigen::Quaterniond q = qa.slerp(s, qb).normalized();
  const Eigen::Vector3d t = (1.0 - s) * a.translation() + s * b.translation();
  return Pose(q.toRotationMatrix(), t);
}

}  // namespace rgbda
