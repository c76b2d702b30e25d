#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>

#include "mrfe/occupancy_octree.hpp"
#include "mrfe/types.hpp"

namespace mrfe {

/// Neighborhood used for the frontier predicate. Face adjacency is the
/// default; the full 26-neighborhood is available for experiments.
enum class Connectivity { Face6, Full26 };

std::span<const Eigen::Vector3i> neighborOffsets(Connectivity c);

/// True iff the finest-depth voxel is Free and at least one neighbor is
/// Unknown. Neighbors outside the bounds count as not-Unknown.
bool frontierPredicate(const OccupancyOctree& octree, const VoxelKey& key,
                       Connectivity c = Connectivity::Face6);

/// Local frontier of the latest map update plus the filtered union of all
/// past local frontiers. All keys are at finest depth and satisfy the
/// frontier predicate against the octree revision of the last update.
struct FrontierSet {
  VoxelKeySet local;
  VoxelKeySet global;
  std::uint64_t iteration = 0;
};

/// Frontier voxels arising from one integration: every changed voxel and its
/// neighbors are re-tested, since a state change can create or destroy the
/// frontier status of adjacent voxels without touching their own state.
VoxelKeySet updateLocalFrontier(const OccupancyOctree& octree, const ChangeSet& changed,
                                Connectivity c = Connectivity::Face6);

/// Merges a new local frontier into the set: stale global members that no
/// longer satisfy the predicate are dropped, the new local keys are added,
/// and the iteration counter advances.
void updateGlobalFrontier(FrontierSet& frontiers, const VoxelKeySet& new_local,
                          const OccupancyOctree& octree, Connectivity c = Connectivity::Face6);

/// Writes frontier keys in the octree snapshot line format (all `free`).
void writeFrontierDump(std::ostream& os, const OccupancyOctree& octree, const VoxelKeySet& keys);

}  // namespace mrfe
