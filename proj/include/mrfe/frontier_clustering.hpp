#pragma once

#include <vector>

#include "mrfe/occupancy_octree.hpp"
#include "mrfe/types.hpp"

namespace mrfe {

/// Parameters of the two-stage frontier reduction: octree-parent coarsening
/// to exploration depth d_exp, then mean-shift over the parent voxel centers.
struct ExplorationConfig {
  enum class Kernel { Flat, Gaussian };

  int d_exp = 14;
  double bandwidth = 2.0;        // meters, mean-shift window radius
  int max_iterations = 100;
  double convergence_tol = 0.02; // meters, per-point shift threshold
  Kernel kernel = Kernel::Flat;
};

/// Config with the default convergence tolerance r_exp / 100, where
/// r_exp = r_max * 2^(d_max - d_exp) is the exploration voxel edge.
ExplorationConfig makeExplorationConfig(const OccupancyOctree& octree, int d_exp,
                                        double bandwidth);

/// Distinct d_exp ancestors of the given finest-depth frontier keys, sorted.
std::vector<VoxelKey> clusterToDepth(const VoxelKeySet& global_frontier, int d_exp);
std::vector<VoxelKey> clusterToDepth(const std::vector<VoxelKey>& global_frontier, int d_exp);

/// Converged mean-shift modes plus the input points assigned to each mode.
/// Every input point belongs to exactly one mode.
struct MeanShiftResult {
  std::vector<Eigen::Vector3d> modes;
  std::vector<std::vector<int>> members;  // indices into the input point list
};

/// Mean-shift with a flat (uniform ball) kernel of radius `bandwidth`: each
/// point is shifted to the mean of input points within the window until the
/// shift drops below convergence_tol or max_iterations is hit. Converged
/// modes closer than bandwidth/2 merge; the merged mode is the mean of its
/// member modes. Empty input yields an empty result (exploration complete),
/// not an error. Brute-force neighbor search switches to a uniform grid
/// above a few thousand points.
MeanShiftResult meanShift(const std::vector<Eigen::Vector3d>& points,
                          const ExplorationConfig& config);

/// Exploration-depth parents of the global frontier plus the mean-shift
/// cluster centroids over their centers — the waypoint candidates.
struct CandidateSet {
  std::vector<VoxelKey> parents;            // F_exp, sorted
  std::vector<Eigen::Vector3d> candidates;  // cluster centroids
  std::vector<std::vector<int>> members;    // per-candidate indices into parents
};

CandidateSet clusterFrontier(const OccupancyOctree& octree, const VoxelKeySet& global_frontier,
                             const ExplorationConfig& config);

}  // namespace mrfe
