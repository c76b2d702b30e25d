#include "mrfe/lidar_sim.hpp"

#include <cmath>
#include <limits>

namespace mrfe {

namespace {

constexpr double kSurfacePush = 1e-3;  // meters, keeps endpoints in the surface voxel
constexpr double kDegToRad = M_PI / 180.0;

}  // namespace

std::optional<double> rayBoxEntry(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir,
                                  const Aabb& box) {
  double t_near = -std::numeric_limits<double>::infinity();
  double t_far = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    if (dir[a] == 0.0) {
      if (origin[a] < box.min[a] || origin[a] > box.max[a]) return std::nullopt;
      continue;
    }
    double t0 = (box.min[a] - origin[a]) / dir[a];
    double t1 = (box.max[a] - origin[a]) / dir[a];
    if (t0 > t1) std::swap(t0, t1);
    t_near = std::max(t_near, t0);
    t_far = std::min(t_far, t1);
    if (t_near > t_far) return std::nullopt;
  }
  if (t_far < 0.0) return std::nullopt;
  if (t_near <= 0.0) return std::nullopt;  // origin inside or behind; no entry hit
  return t_near;
}

std::optional<double> rayBoxExit(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir,
                                 const Aabb& box) {
  double t_far = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    if (dir[a] == 0.0) {
      if (origin[a] < box.min[a] || origin[a] > box.max[a]) return std::nullopt;
      continue;
    }
    double t0 = (box.min[a] - origin[a]) / dir[a];
    double t1 = (box.max[a] - origin[a]) / dir[a];
    if (t0 > t1) std::swap(t0, t1);
    t_far = std::min(t_far, t1);
  }
  if (!std::isfinite(t_far) || t_far <= 0.0) return std::nullopt;
  return t_far;
}

LidarScan simulateScan(const ScenarioWorld& world, const Eigen::Vector3d& position, double yaw,
                       const SensorModel& sensor, int scan_index) {
  LidarScan scan;
  scan.origin = position;
  scan.index = scan_index;

  const double fov = sensor.vertical_fov_deg * kDegToRad;
  const int beams = sensor.vertical_beams;
  const double az_step = sensor.azimuth_step_deg * kDegToRad;
  const int az_count = static_cast<int>(std::round(360.0 / sensor.azimuth_step_deg));

  for (int b = 0; b < beams; ++b) {
    const double elevation = beams == 1 ? 0.0 : -0.5 * fov + fov * b / (beams - 1);
    const double ce = std::cos(elevation);
    const double se = std::sin(elevation);
    for (int ai = 0; ai < az_count; ++ai) {
      const double az = yaw + ai * az_step;
      const Eigen::Vector3d dir(ce * std::cos(az), ce * std::sin(az), se);

      double best_t = std::numeric_limits<double>::infinity();
      bool hit_wall = false;
      for (const auto& ob : world.obstacles) {
        if (const auto t = rayBoxEntry(position, dir, ob); t && *t < best_t) {
          best_t = *t;
          hit_wall = false;
        }
      }
      if (world.solid_bounds) {
        if (const auto t = rayBoxExit(position, dir, world.bounds); t && *t < best_t) {
          best_t = *t;
          hit_wall = true;
        }
      }
      if (!std::isfinite(best_t) || best_t > sensor.max_range || best_t < sensor.min_range)
        continue;

      const double t_point = hit_wall ? best_t - kSurfacePush : best_t + kSurfacePush;
      if (t_point <= 0.0) continue;
      scan.points.push_back(position + t_point * dir);
    }
  }
  return scan;
}

}  // namespace mrfe
