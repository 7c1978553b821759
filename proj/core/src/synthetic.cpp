// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

#include "rgbda/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "rgbda/rng.hpp"

namespace rgbda {

namespace {

struct Hit {
  double depth = std::numeric_limits<double>::infinity();
  int primitive = -1;               // 0 ground, 1.. boxes, then cylinders
  Eigen::Vector3d point{0, 0, 0};   // world-frame hit position
};

// Ray origin o, unit-free direction w scaled so that the parameter equals
// camera z-depth (w = R * ((u-cx)/fx, (v-cy)/fy, 1)).
void hit_ground(const Eigen::Vector3d& o, const Eigen::Vector3d& w, Hit& best) {
  if (w.z() >= 0.0) return;  // parallel or ascending: never reaches z = 0
  const double s = -o.z() / w.z();
  if (s > 0.0 && s < best.depth) best = {s, 0, o + s * w};
}

void hit_box(const Eigen::Vector3d& o, const Eigen::Vector3d& w, const Box& box, int id,
             Hit& best) {
  double s_near = -std::numeric_limits<double>::infinity();
  double s_far = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    if (w[a] == 0.0) {
      if (o[a] < box.min[a] || o[a] > box.max[a]) return;
      continue;
    }
    double t0 = (box.min[a] - o[a]) / w[a];
    double t1 = (box.max[a] - o[a]) / w[a];
    if (t0 > t1) std::swap(t0, t1);
    s_near = std::max(s_near, t0);
    s_far = std::min(s_far, t1);
    if (s_near > s_far) return;
  }
  if (s_near > 0.0 && s_near < best.depth) best = {s_near, id, o + s_near * w};
}

void hit_cylinder(const Eigen::Vector3d& o, const Eigen::Vector3d& w, const Cylinder& cyl,
                  int id, Hit& best) {
  const double ox = o.x() - cyl.x;
  const double oy = o.y() - cyl.y;
  const double a = w.x() * w.x() + w.y() * w.y();
  const double b = 2.0 * (ox * w.x() + oy * w.y());
  const double c = ox * ox + oy * oy - cyl.radius * cyl.radius;
  if (a > 0.0) {
    const double disc = b * b - 4.0 * a * c;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      for (const double s : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)}) {
        if (s <= 0.0 || s >= best.depth) continue;
        const double z = o.z() + s * w.z();
        if (z >= 0.0 && z <= cyl.height) {
          best = {s, id, o + s * w};
          break;  // roots are ordered, the first valid one is nearest
        }
      }
    }
  }
  // Top cap disk at z = height.
  if (w.z() != 0.0) {
    const double s = (cyl.height - o.z()) / w.z();
    if (s > 0.0 && s < best.depth) {
      const double hx = ox + s * w.x();
      const double hy = oy + s * w.y();
      if (hx * hx + hy * hy <= cyl.radius * cyl.radius) best = {s, id, o + s * w};
    }
  }
}

Hit trace(const SceneSpec& spec, const Eigen::Vector3d& o, const Eigen::Vector3d& w) {
  Hit best;
  if (spec.ground_plane) hit_ground(o, w, best);
  for (size_t i = 0; i < spec.boxes.size(); ++i)
    hit_box(o, w, spec.boxes[i], static_cast<int>(i) + 1, best);
  const int cyl_base = static_cast<int>(spec.boxes.size()) + 1;
  for (size_t i = 0; i < spec.cylinders.size(); ++i)
    hit_cylinder(o, w, spec.cylinders[i], cyl_base + static_cast<int>(i), best);
  if (best.primitive >= 0 && (best.depth < spec.min_range_m || best.depth > spec.max_range_m))
    best.primitive = -1;
  return best;
}

float checker(double x, double y, double cell) {
  const long px = static_cast<long>(std::floor(x / cell));
  const long py = static_cast<long>(std::floor(y / cell));
  return ((px + py) & 1) ? 0.58f : 0.42f;
}

// Per-primitive base colors cycle through distinct hues.
std::array<float, 3> base_color(int index) {
  static constexpr std::array<std::array<float, 3>, 6> palette = {{
      {0.85f, 0.35f, 0.30f},
      {0.30f, 0.65f, 0.85f},
      {0.45f, 0.80f, 0.35f},
      {0.85f, 0.70f, 0.25f},
      {0.60f, 0.40f, 0.80f},
      {0.80f, 0.50f, 0.60f},
  }};
  return palette[static_cast<size_t>(index) % palette.size()];
}

}  // namespace

SyntheticScene::SyntheticScene(SceneSpec spec) : spec_(std::move(spec)) {
  spec_.intrinsics.validate();
  if (!spec_.ground_plane && spec_.boxes.empty() && spec_.cylinders.empty())
    throw std::invalid_argument("synthetic scene: no primitives");
  if (spec_.trajectory.frame_count < 1)
    throw std::invalid_argument("synthetic scene: trajectory needs at least one frame");
  if (!(spec_.trajectory.spacing_m > 0.0))
    throw std::invalid_argument("synthetic scene: spacing must be positive");
  if (spec_.ground_plane && !(spec_.trajectory.height_m > 0.0))
    throw std::invalid_argument("synthetic scene: camera at or below the ground plane");
  if (spec_.trajectory.path == TrajectorySpec::Path::kArc && !(spec_.trajectory.arc_radius_m > 0.0))
    throw std::invalid_argument("synthetic scene: arc radius must be positive");
  if (spec_.sparsify_row_step < 1)
    throw std::invalid_argument("synthetic scene: sparsify_row_step must be >= 1");
  if (!(spec_.min_range_m > 0.0) || !(spec_.max_range_m > spec_.min_range_m))
    throw std::invalid_argument("synthetic scene: invalid depth range");
  for (const auto& b : spec_.boxes)
    if (!((b.min.array() < b.max.array()).all()))
      throw std::invalid_argument("synthetic scene: degenerate box");
  for (const auto& c : spec_.cylinders)
    if (!(c.radius > 0.0) || !(c.height > 0.0))
      throw std::invalid_argument("synthetic scene: degenerate cylinder");
}

DepthMap SyntheticScene::render_depth(const Pose& pose, const CameraIntrinsics& intr) const {
  intr.validate();
  DepthMap out(intr.width, intr.height);
  const Eigen::Vector3d o = pose.translation();
  for (int v = 0; v < intr.height; ++v) {
    for (int u = 0; u < intr.width; ++u) {
      const Eigen::Vector3d dir_cam((u - intr.cx) / intr.fx, (v - intr.cy) / intr.fy, 1.0);
      const Hit best = trace(spec_, o, pose.rotation() * dir_cam);
      if (best.primitive >= 0) out.set(u, v, best.depth);
    }
  }
  return out;
}

Image SyntheticScene::render_rgb(const Pose& pose, const CameraIntrinsics& intr) const {
  intr.validate();
  Image out(intr.width, intr.height);
  const Eigen::Vector3d o = pose.translation();
  for (int v = 0; v < intr.height; ++v) {
    for (int u = 0; u < intr.width; ++u) {
      const Eigen::Vector3d dir_cam((u - intr.cx) / intr.fx, (v - intr.cy) / intr.fy, 1.0);
      const Hit best = trace(spec_, o, pose.rotation() * dir_cam);
      if (best.primitive < 0) continue;  // sky stays black
      if (best.primitive == 0) {
        const float g = checker(best.point.x(), best.point.y(), 2.0);
        out.set_rgb(u, v, g, g, g * 0.9f);
      } else {
        const auto base = base_color(best.primitive - 1);
        // Horizontal band pattern gives the walls visible texture.
        const float shade =
            0.75f + 0.25f * static_cast<float>(std::sin(2.1 * best.point.z() +
                                                        0.7 * best.point.x() +
                                                        0.4 * best.point.y()));
        out.set_rgb(u, v, base[0] * shade, base[1] * shade, base[2] * shade);
      }
    }
  }
  return out;
}

std::vector<Pose> SyntheticScene::trajectory_poses() const {
  const TrajectorySpec& traj = spec_.trajectory;
  std::mt19937_64 engine(spec_.seed);
  std::vector<Pose> out;
  out.reserve(traj.frame_count);
  for (int i = 0; i < traj.frame_count; ++i) {
    Eigen::Vector3d position;
    Eigen::Vector3d forward;
    if (traj.path == TrajectorySpec::Path::kStraight) {
      position = {traj.start_x + i * traj.spacing_m, traj.start_y, traj.height_m};
      forward = {1.0, 0.0, 0.0};
    } else {
      const double theta = i * traj.spacing_m / traj.arc_radius_m;
      position = {traj.start_x + traj.arc_radius_m * std::sin(theta),
                  traj.start_y + traj.arc_radius_m * (1.0 - std::cos(theta)),
                  traj.height_m};
      forward = {std::cos(theta), std::sin(theta), 0.0};
    }
    if (traj.lateral_jitter_m > 0.0) {
      const double offset = rng::symmetric(engine, traj.lateral_jitter_m);
      const Eigen::Vector3d left(-forward.y(), forward.x(), 0.0);
      position += offset * left;
    }
    const Eigen::Vector3d up(0.0, 0.0, 1.0);
    const Eigen::Vector3d right = forward.cross(up).normalized();
    const Eigen::Vector3d down = forward.cross(right).normalized();
    Eigen::Matrix3d rot;
    rot.col(0) = right;
    rot.col(1) = down;
    rot.col(2) = forward;
    out.emplace_back(rot, position);
  }
  return out;
}

std::vector<Frame> SyntheticScene::generate_frames() const {
  const auto poses = trajectory_poses();
  std::vector<Frame> frames;
  frames.reserve(poses.size());
  for (size_t i = 0; i < poses.size(); ++i) {
    Frame f;
    char id[16];
    std::snprintf(id, sizeof(id), "%06zu", i);
    f.frame_id = id;
    f.pose = poses[i];
    f.depth = render_depth(poses[i], spec_.intrinsics);
    f.rgb = render_rgb(poses[i], spec_.intrinsics);
    if (spec_.sparsify_row_step > 1) {
      for (int v = 0; v < f.depth.height(); ++v) {
        if (v % spec_.sparsify_row_step == 0) continue;
        for (int u = 0; u < f.depth.width(); ++u) f.depth.set_invalid(u, v);
      }
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

}  // namespace rgbda
