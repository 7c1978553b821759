// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

#include "rgbda/strategies.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <stdexcept>

#include "rgbda/rng.hpp"

namespace rgbda {

std::string to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::kReconstruction: return "reconstruction";
    case StrategyKind::kInterpolation: return "interpolation";
    case StrategyKind::kAngled: return "angled";
    case StrategyKind::kTranslateHorizontal: return "translate-horizontal";
    case StrategyKind::kTranslateVertical: return "translate-vertical";
    case StrategyKind::kRandomPerturb: return "random-perturb";
  }
  throw std::logic_error("unknown strategy kind");
}

StrategyKind strategy_kind_from_string(const std::string& name) {
  if (name == "reconstruction") return StrategyKind::kReconstruction;
  if (name == "interpolation") return StrategyKind::kInterpolation;
  if (name == "angled") return StrategyKind::kAngled;
  if (name == "translate-horizontal") return StrategyKind::kTranslateHorizontal;
  if (name == "translate-vertical") return StrategyKind::kTranslateVertical;
  if (name == "random-perturb") return StrategyKind::kRandomPerturb;
  throw std::invalid_argument("unknown strategy kind: " + name);
}

void StrategySpec::validate() const {
  if (!(angle_deg > 0.0)) throw std::invalid_argument("strategy: angle_deg must be positive");
  if (!(translate_m > 0.0))
    throw std::invalid_argument("strategy: translate_m must be positive");
  if (interp_count < 1) throw std::invalid_argument("strategy: interp_count must be >= 1");
  if (perturb_translate_m < 0.0 || perturb_rotate_deg < 0.0)
    throw std::invalid_argument("strategy: perturb ranges must be non-negative");
}

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

std::string format_signed(const char* prefix, double value, const char* unit) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s%+g%s", prefix, value, unit);
  return buf;
}

Pose yawed(const Pose& src, double angle_deg) {
  // Camera up axis is -y (image y points down).
  const Eigen::AngleAxisd yaw(angle_deg * kDegToRad, Eigen::Vector3d(0.0, -1.0, 0.0));
  return Pose(src.rotation() * yaw.toRotationMatrix(), src.translation());
}

Pose translated(const Pose& src, const Eigen::Vector3d& axis, double offset, bool camera_frame) {
  const Eigen::Vector3d delta =
      camera_frame ? Eigen::Vector3d(src.rotation() * (offset * axis)) : Eigen::Vector3d(offset * axis);
  return Pose(src.rotation(), src.translation() + delta);
}

}  // namespace

std::vector<SynthesizedPose> synthesize_poses(const std::vector<Pose>& poses,
                                              const StrategySpec& spec) {
  if (poses.empty()) throw std::invalid_argument("synthesize_poses: empty pose list");
  spec.validate();

  std::vector<SynthesizedPose> out;
  switch (spec.kind) {
    case StrategyKind::kReconstruction: {
      out.reserve(poses.size());
      for (int i = 0; i < static_cast<int>(poses.size()); ++i)
        out.push_back({poses[i], i, spec.kind, ""});
      break;
    }
    case StrategyKind::kInterpolation: {
      out.reserve((poses.size() - 1) * spec.interp_count);
      for (int i = 0; i + 1 < static_cast<int>(poses.size()); ++i) {
        for (int j = 1; j <= spec.interp_count; ++j) {
          const double s = static_cast<double>(j) / (spec.interp_count + 1);
          char tag[32];
          std::snprintf(tag, sizeof(tag), "s=%d/%d", j, spec.interp_count + 1);
          out.push_back({interpolate_pose(poses[i], poses[i + 1], s), i, spec.kind, tag});
        }
      }
      break;
    }
    case StrategyKind::kAngled: {
      out.reserve(2 * poses.size());
      for (int i = 0; i < static_cast<int>(poses.size()); ++i) {
        out.push_back({yawed(poses[i], spec.angle_deg), i, spec.kind,
                       format_signed("yaw=", spec.angle_deg, "deg")});
        out.push_back({yawed(poses[i], -spec.angle_deg), i, spec.kind,
                       format_signed("yaw=", -spec.angle_deg, "deg")});
      }
      break;
    }
    case StrategyKind::kTranslateHorizontal:
    case StrategyKind::kTranslateVertical: {
      const bool horizontal = spec.kind == StrategyKind::kTranslateHorizontal;
      // Camera frame: x = image right, y = image down. World frame option:
      // x for horizontal, z (up) for vertical.
      const Eigen::Vector3d axis =
          horizontal ? Eigen::Vector3d::UnitX()
                     : (spec.camera_frame ? Eigen::Vector3d::UnitY() : Eigen::Vector3d::UnitZ());
      const char* prefix = horizontal ? "dx=" : "dy=";
      out.reserve(2 * poses.size());
      for (int i = 0; i < static_cast<int>(poses.size()); ++i) {
        out.push_back({translated(poses[i], axis, spec.translate_m, spec.camera_frame), i,
                       spec.kind, format_signed(prefix, spec.translate_m, "m")});
        out.push_back({translated(poses[i], axis, -spec.translate_m, spec.camera_frame), i,
                       spec.kind, format_signed(prefix, -spec.translate_m, "m")});
      }
      break;
    }
    case StrategyKind::kRandomPerturb: {
      std::mt19937_64 engine(spec.seed);
      char tag[32];
      std::snprintf(tag, sizeof(tag), "seed=%llu", static_cast<unsigned long long>(spec.seed));
      out.reserve(poses.size());
      for (int i = 0; i < static_cast<int>(poses.size()); ++i) {
        Eigen::Vector3d dt;
        for (int a = 0; a < 3; ++a) dt[a] = rng::symmetric(engine, spec.perturb_translate_m);
        Eigen::Vector3d dr;
        for (int a = 0; a < 3; ++a)
          dr[a] = rng::symmetric(engine, spec.perturb_rotate_deg) * kDegToRad;
        const Eigen::Matrix3d delta =
            (Eigen::AngleAxisd(dr.x(), Eigen::Vector3d::UnitX()) *
             Eigen::AngleAxisd(dr.y(), Eigen::Vector3d::UnitY()) *
             Eigen::AngleAxisd(dr.z(), Eigen::Vector3d::UnitZ()))
                .toRotationMatrix();
        const auto& src = poses[i];
        out.push_back({Pose(src.rotation() * delta, src.translation() + src.rotation() * dt), i,
                       spec.kind, tag});
      }
      break;
    }
  }
  return out;
}

}  // namespace rgbda
