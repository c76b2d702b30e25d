#pragma once

#include <optional>

#include "mrfe/scenario.hpp"
#include "mrfe/submap_pipeline.hpp"
#include "mrfe/types.hpp"

namespace mrfe {

/// First parameter t > 0 at which the ray origin + t*dir enters the box,
/// or nothing if the ray misses it.
std::optional<double> rayBoxEntry(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir,
                                  const Aabb& box);

/// Parameter t > 0 at which a ray starting inside the box leaves it.
std::optional<double> rayBoxExit(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir,
                                 const Aabb& box);

/// Casts all sensor beams from the pose and returns the nearest hit per beam
/// within max range. Hit points are nudged a millimeter along the ray into
/// obstacle surfaces and back from boundary walls, so the endpoint voxel is
/// the surface voxel on the solid side. Beams without a hit contribute no
/// point. Deterministic for identical inputs.
LidarScan simulateScan(const ScenarioWorld& world, const Eigen::Vector3d& position, double yaw,
                       const SensorModel& sensor, int scan_index = 0);

}  // namespace mrfe
