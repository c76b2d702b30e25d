#pragma once

#include <optional>
#include <vector>

#include "mrfe/occupancy_octree.hpp"
#include "mrfe/types.hpp"

namespace mrfe {

/// Fine-grid traversability: a voxel is traversable when it is Free and its
/// center keeps at least `safety_margin` (Euclidean) from every Occupied
/// voxel center. Unknown voxels are never traversable; with
/// `avoid_unknown_adjacent` set, Free voxels face-adjacent to Unknown are
/// excluded as well — unknown space may hide unmapped geometry, and free
/// labels right at the unknown boundary can be grazing artifacts.
class TraversabilityMap {
 public:
  TraversabilityMap(const OccupancyOctree& octree, double safety_margin,
                    bool avoid_unknown_adjacent = false);

  bool traversable(std::int32_t x, std::int32_t y, std::int32_t z) const;
  bool traversable(const VoxelKey& key) const { return traversable(key.ix, key.iy, key.iz); }
  const Eigen::Vector3i& dims() const { return dims_; }

 private:
  Eigen::Vector3i dims_;
  std::vector<std::uint8_t> blocked_;  // occupied or inside the margin ball
  std::vector<std::uint8_t> free_;
};

/// True when every voxel pierced by the segment a-b is traversable (the
/// voxel containing `a` is exempt, mirroring the start exemption below).
bool lineOfSight(const OccupancyOctree& octree, const TraversabilityMap& map,
                 const Eigen::Vector3d& a, const Eigen::Vector3d& b);

/// Traversable finest voxel whose center is nearest to `near`, searched in a
/// cube of the given radius; ties break lexicographically.
std::optional<VoxelKey> nearestTraversableVoxel(const OccupancyOctree& octree,
                                                const TraversabilityMap& map,
                                                const Eigen::Vector3d& near, double radius);

/// Deterministic shortest-path search over traversable finest-depth voxels
/// (26-connected A* with Euclidean step costs), followed by line-of-sight
/// shortcutting. The polyline starts at the exact start point and ends at
/// the goal voxel center. When the goal voxel is not traversable the goal
/// clamps to the nearest traversable voxel within `goal_clamp_radius`.
/// Returns nothing when no traversable goal exists or the goal is
/// unreachable. The start voxel is exempt from the traversability test (the
/// robot is demonstrably there), but throws std::invalid_argument when the
/// start voxel is Occupied — that is a simulation inconsistency.
std::optional<std::vector<Eigen::Vector3d>> planPath(const OccupancyOctree& octree,
                                                     const Eigen::Vector3d& start,
                                                     const Eigen::Vector3d& goal,
                                                     double safety_margin,
                                                     double goal_clamp_radius);

}  // namespace mrfe
