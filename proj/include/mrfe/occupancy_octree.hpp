#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "mrfe/types.hpp"

namespace mrfe {

struct VolumeFractions {
  double free_frac = 0.0;
  double occupied_frac = 0.0;
  double unknown_frac = 0.0;
};

/// Finest-depth keys whose state changed during one integration, sorted ascending.
using ChangeSet = std::vector<VoxelKey>;

/// Tri-state occupancy map over a bounded axis-aligned volume.
///
/// The map is a complete octree stored level by level: the finest level
/// (depth d_max, voxel edge r_max) is authoritative, every coarser level
/// holds the dominance summary of its in-bounds children
/// (Occupied > Unknown > Free). Queries at any depth are therefore O(1)
/// and always consistent with finest-depth content. Voxels outside the
/// bounds are rejected instead of growing the tree, which keeps
/// "everything explored" a decidable condition.
///
/// Updates are deterministic tri-state rather than probabilistic log-odds:
/// rays carve Unknown voxels to Free, endpoints become Occupied, and an
/// Occupied voxel is never demoted by a later ray ("occupied wins").
///
/// Concurrency: single writer. Reads may run concurrently with each other
/// between mutations; the planner works on a logically frozen map per cycle.
class OccupancyOctree {
 public:
  static constexpr int kDefaultMaxDepth = 16;

  /// `resolution` is the finest voxel edge length in meters; voxels at
  /// depth d have edge resolution * 2^(max_depth - d).
  OccupancyOctree(double resolution, const Aabb& bounds, int max_depth = kDefaultMaxDepth);

  /// Integrates one submap cloud: for every point, voxels along the ray
  /// sensor_origin -> point become Free if previously Unknown, and the
  /// endpoint voxel becomes Occupied. Returns the exact set of finest-depth
  /// keys whose state changed, sorted. Points outside bounds are skipped
  /// and tallied in skippedPoints(). The revision counter increments once
  /// per call, including for empty clouds.
  ChangeSet integrateCloud(const std::vector<Eigen::Vector3d>& points,
                           const Eigen::Vector3d& sensor_origin);

  /// State of a voxel at any depth. For depth < max_depth the result is the
  /// dominance summary of the finest descendants: Occupied if any descendant
  /// is Occupied, else Unknown if any is Unknown, else Free.
  /// Throws std::out_of_range for keys outside the bounds.
  VoxelState stateAt(const VoxelKey& key) const;

  /// Ancestor of `key` at `target_depth` (coordinates shifted right).
  /// Throws std::invalid_argument if target_depth is not in [1, key.depth].
  static VoxelKey parentKey(const VoxelKey& key, int target_depth);

  /// Fraction of Unknown among the finest voxels whose centers lie inside
  /// the axis-aligned cube of side `side` centered at `center`, clipped to
  /// bounds. Returns 0 if the clipped cube contains no voxel centers.
  /// Throws std::invalid_argument for non-positive side.
  double unknownFractionInCube(const Eigen::Vector3d& center, double side) const;

  /// Free/occupied/unknown fractions over all finest voxels in bounds.
  VolumeFractions volumeFractions() const;

  // --- geometry -----------------------------------------------------------

  bool contains(const Eigen::Vector3d& p) const { return bounds_.contains(p); }
  bool inBounds(const VoxelKey& key) const;

  /// Key of the voxel containing `p` at the given depth (finest by default).
  /// Throws std::out_of_range if `p` is outside the bounds.
  VoxelKey keyAtPoint(const Eigen::Vector3d& p, int depth) const;
  VoxelKey keyAtPoint(const Eigen::Vector3d& p) const { return keyAtPoint(p, d_max_); }

  Eigen::Vector3d voxelCenter(const VoxelKey& key) const;

  /// Center of the in-bounds portion of the voxel. Coarse voxels at the
  /// boundary overhang the bounds; their plain centers can lie outside.
  Eigen::Vector3d clippedVoxelCenter(const VoxelKey& key) const;

  double edgeLength(int depth) const;

  double resolution() const { return r_max_; }
  int maxDepth() const { return d_max_; }
  const Aabb& bounds() const { return bounds_; }
  Eigen::Vector3i fineDims() const { return fine_dims_; }
  std::size_t fineVoxelCount() const { return fine_total_; }
  std::uint64_t revision() const { return revision_; }
  std::uint64_t skippedPoints() const { return skipped_points_; }
  std::size_t freeCount() const { return free_count_; }
  std::size_t occupiedCount() const { return occupied_count_; }

  // --- direct construction (fixtures, snapshot import, benchmarks) ---------

  /// Assigns the state of one finest-depth voxel directly, bypassing ray
  /// integration. Returns true if the stored state changed. Does not touch
  /// the revision counter.
  bool setState(const VoxelKey& fine_key, VoxelState s);

  /// Calls fn(VoxelKey) for every finest voxel currently in state `s`.
  template <typename Fn>
  void forEachFineVoxel(VoxelState s, Fn&& fn) const {
    const Level& fine = levels_[d_max_];
    std::size_t lin = 0;
    for (std::int32_t z = 0; z < fine.dims.z(); ++z)
      for (std::int32_t y = 0; y < fine.dims.y(); ++y)
        for (std::int32_t x = 0; x < fine.dims.x(); ++x, ++lin)
          if (static_cast<VoxelState>(fine.states[lin]) == s)
            fn(VoxelKey{x, y, z, d_max_});
  }

  // --- snapshot -------------------------------------------------------------

  /// Line-oriented text snapshot: header `r_max d_max minx miny minz maxx
  /// maxy maxz`, then one `ix iy iz state` record per non-unknown finest
  /// voxel, sorted. `state` is `free` or `occupied`.
  void exportSnapshot(std::ostream& os) const;
  static OccupancyOctree importSnapshot(std::istream& is);

 private:
  struct Level {
    Eigen::Vector3i dims = Eigen::Vector3i::Zero();
    std::vector<std::uint8_t> states;
  };

  static std::size_t linIndex(const Level& lvl, std::int32_t x, std::int32_t y, std::int32_t z) {
    return (static_cast<std::size_t>(z) * lvl.dims.y() + y) * lvl.dims.x() + x;
  }

  VoxelState fineState(std::int32_t x, std::int32_t y, std::int32_t z) const {
    const Level& fine = levels_[d_max_];
    return static_cast<VoxelState>(fine.states[linIndex(fine, x, y, z)]);
  }

  /// Writes one finest voxel and repairs the summary chain above it.
  void assignFine(std::int32_t x, std::int32_t y, std::int32_t z, VoxelState s);
  VoxelState combineChildren(int depth, std::int32_t x, std::int32_t y, std::int32_t z) const;

  double r_max_;
  int d_max_;
  Aabb bounds_;
  Eigen::Vector3i fine_dims_;
  std::size_t fine_total_ = 0;
  std::vector<Level> levels_;  // indexed by depth, [1, d_max]; index 0 unused
  std::size_t free_count_ = 0;
  std::size_t occupied_count_ = 0;
  std::uint64_t revision_ = 0;
  std::uint64_t skipped_points_ = 0;
};

}  // namespace mrfe
