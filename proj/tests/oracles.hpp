// Test-only oracles: independent brute-force implementations used to verify
// the incremental/production code paths. Everything here recomputes from
// scratch and must stay decoupled from the implementation it checks.
#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "mrfe/frontier_detection.hpp"
#include "mrfe/occupancy_octree.hpp"
#include "mrfe/scenario.hpp"

namespace mrfe::test {

/// Full-grid copy of every finest voxel state, indexed x + dims.x*(y + dims.y*z).
inline std::vector<VoxelState> snapshotStates(const OccupancyOctree& tree) {
  const Eigen::Vector3i dims = tree.fineDims();
  std::vector<VoxelState> out;
  out.reserve(tree.fineVoxelCount());
  for (std::int32_t z = 0; z < dims.z(); ++z)
    for (std::int32_t y = 0; y < dims.y(); ++y)
      for (std::int32_t x = 0; x < dims.x(); ++x)
        out.push_back(tree.stateAt(VoxelKey{x, y, z, tree.maxDepth()}));
  return out;
}

/// Naive double-loop frontier scan: for every finest voxel, re-derive the
/// predicate from raw state queries.
inline VoxelKeySet naiveFrontierScan(const OccupancyOctree& tree,
                                     Connectivity c = Connectivity::Face6) {
  const Eigen::Vector3i dims = tree.fineDims();
  const int d = tree.maxDepth();
  VoxelKeySet frontier;
  for (std::int32_t z = 0; z < dims.z(); ++z)
    for (std::int32_t y = 0; y < dims.y(); ++y)
      for (std::int32_t x = 0; x < dims.x(); ++x) {
        if (tree.stateAt(VoxelKey{x, y, z, d}) != VoxelState::Free) continue;
        bool has_unknown = false;
        for (const auto& off : neighborOffsets(c)) {
          const std::int32_t nx = x + off.x(), ny = y + off.y(), nz = z + off.z();
          if (nx < 0 || ny < 0 || nz < 0 || nx >= dims.x() || ny >= dims.y() || nz >= dims.z())
            continue;
          if (tree.stateAt(VoxelKey{nx, ny, nz, d}) == VoxelState::Unknown) {
            has_unknown = true;
            break;
          }
        }
        if (has_unknown) frontier.insert(VoxelKey{x, y, z, d});
      }
  return frontier;
}

/// Geometric-containment parent: the coarse voxel whose cube contains the
/// center of the fine voxel, found by coordinate arithmetic on the cube
/// lattice rather than bit shifts.
inline VoxelKey containmentParent(const OccupancyOctree& tree, const VoxelKey& fine,
                                  int d_exp) {
  const Eigen::Vector3d center = tree.voxelCenter(fine);
  const double edge = tree.edgeLength(d_exp);
  return VoxelKey{
      static_cast<std::int32_t>(std::floor((center.x() - tree.bounds().min.x()) / edge)),
      static_cast<std::int32_t>(std::floor((center.y() - tree.bounds().min.y()) / edge)),
      static_cast<std::int32_t>(std::floor((center.z() - tree.bounds().min.z()) / edge)),
      d_exp};
}

/// Exhaustive per-voxel tally of the three states.
inline VolumeFractions countedFractions(const OccupancyOctree& tree) {
  const Eigen::Vector3i dims = tree.fineDims();
  const int d = tree.maxDepth();
  std::size_t free = 0, occ = 0, unknown = 0;
  for (std::int32_t z = 0; z < dims.z(); ++z)
    for (std::int32_t y = 0; y < dims.y(); ++y)
      for (std::int32_t x = 0; x < dims.x(); ++x) {
        switch (tree.stateAt(VoxelKey{x, y, z, d})) {
          case VoxelState::Free: ++free; break;
          case VoxelState::Occupied: ++occ; break;
          case VoxelState::Unknown: ++unknown; break;
        }
      }
  const double total = static_cast<double>(free + occ + unknown);
  return VolumeFractions{free / total, occ / total, unknown / total};
}

/// Ground-truth reachable voxel count: flood fill (face adjacency) from the
/// start over voxels whose centers are inside the bounds and outside every
/// obstacle. Independent of the octree contents.
inline std::size_t reachableVoxelCount(const ScenarioWorld& world, double r,
                                       std::vector<std::uint8_t>* reachable_out = nullptr) {
  const Eigen::Vector3d ext = world.bounds.extent();
  const Eigen::Vector3i dims(
      static_cast<int>(std::ceil(ext.x() / r - 1e-9)),
      static_cast<int>(std::ceil(ext.y() / r - 1e-9)),
      static_cast<int>(std::ceil(ext.z() / r - 1e-9)));
  const auto lin = [&](int x, int y, int z) {
    return static_cast<std::size_t>((z * dims.y() + y)) * dims.x() + x;
  };
  const auto center = [&](int x, int y, int z) {
    return Eigen::Vector3d(world.bounds.min + r * Eigen::Vector3d(x + 0.5, y + 0.5, z + 0.5));
  };
  const auto traversable = [&](int x, int y, int z) {
    const Eigen::Vector3d p = center(x, y, z);
    for (const auto& ob : world.obstacles)
      if ((p.array() >= ob.min.array()).all() && (p.array() <= ob.max.array()).all())
        return false;
    return true;
  };

  const std::size_t total = static_cast<std::size_t>(dims.x()) * dims.y() * dims.z();
  std::vector<std::uint8_t> seen(total, 0);
  std::vector<Eigen::Vector3i> stack;
  Eigen::Vector3i start(
      static_cast<int>((world.start.x() - world.bounds.min.x()) / r),
      static_cast<int>((world.start.y() - world.bounds.min.y()) / r),
      static_cast<int>((world.start.z() - world.bounds.min.z()) / r));
  stack.push_back(start);
  seen[lin(start.x(), start.y(), start.z())] = 1;
  std::size_t count = 0;
  const Eigen::Vector3i offs[6] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0},
                                   {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  while (!stack.empty()) {
    const Eigen::Vector3i v = stack.back();
    stack.pop_back();
    ++count;
    for (const auto& o : offs) {
      const Eigen::Vector3i n = v + o;
      if (n.x() < 0 || n.y() < 0 || n.z() < 0 || n.x() >= dims.x() || n.y() >= dims.y() ||
          n.z() >= dims.z())
        continue;
      std::size_t i = lin(n.x(), n.y(), n.z());
      if (seen[i] || !traversable(n.x(), n.y(), n.z())) continue;
      seen[i] = 1;
      stack.push_back(n);
    }
  }
  if (reachable_out != nullptr) *reachable_out = std::move(seen);
  return count;
}

/// Deterministic random tri-state grid on an existing octree.
inline void fillRandomStates(OccupancyOctree& tree, std::mt19937& rng) {
  const Eigen::Vector3i dims = tree.fineDims();
  std::uniform_int_distribution<int> dist(0, 2);
  for (std::int32_t z = 0; z < dims.z(); ++z)
    for (std::int32_t y = 0; y < dims.y(); ++y)
      for (std::int32_t x = 0; x < dims.x(); ++x)
        tree.setState(VoxelKey{x, y, z, tree.maxDepth()},
                      static_cast<VoxelState>(dist(rng)));
}

inline Eigen::Vector3d randomPointIn(const Aabb& box, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::Vector3d p;
  for (int a = 0; a < 3; ++a)
    p[a] = box.min[a] + u(rng) * (box.max[a] - box.min[a]) * 0.999999;
  return p;
}

}  // namespace mrfe::test
