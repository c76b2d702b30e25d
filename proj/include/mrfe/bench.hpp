#pragma once

#include <cstdint>
#include <vector>

#include "mrfe/occupancy_octree.hpp"

namespace mrfe {

/// Procedurally generated map whose frontier has roughly the requested size:
/// hollow free box shells scattered in unknown space, every shell voxel
/// bordering unknown on at least one face. `changed` lists the assigned
/// voxels, standing in for the integration ChangeSet.
struct SyntheticFrontier {
  OccupancyOctree octree;
  ChangeSet changed;
  Eigen::Vector3d robot;
};

SyntheticFrontier generateSyntheticFrontier(std::size_t target_frontier, std::uint64_t seed);

struct BenchCase {
  std::size_t requested = 0;
  std::size_t frontier = 0;   // measured |F_g|
  std::size_t parents = 0;    // |F_exp|
  std::size_t candidates = 0; // |F_c|
  double t_detect = 0.0;
  double t_cluster = 0.0;
  double t_select = 0.0;
  double t_total = 0.0;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LinearFit fitLinear(const std::vector<double>& xs, const std::vector<double>& ys);

struct BenchReport {
  std::vector<BenchCase> cases;
  LinearFit fit;  // t_total versus measured |F_g|
  std::uint64_t seed = 0;
};

/// Times frontier detection, clustering, and selection on synthetic
/// frontiers of the given sizes and fits total planner time against |F_g|.
BenchReport runBench(const std::vector<std::size_t>& sizes, std::uint64_t seed);

}  // namespace mrfe
