#include "mrfe/frontier_detection.hpp"

#include <algorithm>
#include <array>
#include <ostream>
#include <vector>

namespace mrfe {

namespace {

const std::array<Eigen::Vector3i, 6> kFace6 = {
    Eigen::Vector3i{1, 0, 0},  Eigen::Vector3i{-1, 0, 0}, Eigen::Vector3i{0, 1, 0},
    Eigen::Vector3i{0, -1, 0}, Eigen::Vector3i{0, 0, 1},  Eigen::Vector3i{0, 0, -1}};

std::array<Eigen::Vector3i, 26> makeFull26() {
  std::array<Eigen::Vector3i, 26> out{};
  std::size_t i = 0;
  for (int dz = -1; dz <= 1; ++dz)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0 && dz == 0) continue;
        out[i++] = Eigen::Vector3i(dx, dy, dz);
      }
  return out;
}

const std::array<Eigen::Vector3i, 26> kFull26 = makeFull26();

}  // namespace

std::span<const Eigen::Vector3i> neighborOffsets(Connectivity c) {
  if (c == Connectivity::Face6) return {kFace6.data(), kFace6.size()};
  return {kFull26.data(), kFull26.size()};
}

bool frontierPredicate(const OccupancyOctree& octree, const VoxelKey& key, Connectivity c) {
  if (octree.stateAt(key) != VoxelState::Free) return false;
  for (const auto& off : neighborOffsets(c)) {
    const VoxelKey n{key.ix + off.x(), key.iy + off.y(), key.iz + off.z(), key.depth};
    if (!octree.inBounds(n)) continue;
    if (octree.stateAt(n) == VoxelState::Unknown) return true;
  }
  return false;
}

VoxelKeySet updateLocalFrontier(const OccupancyOctree& octree, const ChangeSet& changed,
                                Connectivity c) {
  VoxelKeySet local;
  const auto offsets = neighborOffsets(c);
  auto consider = [&](const VoxelKey& k) {
    if (octree.inBounds(k) && frontierPredicate(octree, k, c)) local.insert(k);
  };
  for (const auto& k : changed) {
    consider(k);
    for (const auto& off : offsets)
      consider(VoxelKey{k.ix + off.x(), k.iy + off.y(), k.iz + off.z(), k.depth});
  }
  return local;
}

void updateGlobalFrontier(FrontierSet& frontiers, const VoxelKeySet& new_local,
                          const OccupancyOctree& octree, Connectivity c) {
  for (auto it = frontiers.global.begin(); it != frontiers.global.end();) {
    if (!frontierPredicate(octree, *it, c))
      it = frontiers.global.erase(it);
    else
      ++it;
  }
  frontiers.global.insert(new_local.begin(), new_local.end());
  frontiers.local = new_local;
  ++frontiers.iteration;
}

void writeFrontierDump(std::ostream& os, const OccupancyOctree& octree, const VoxelKeySet& keys) {
  os.precision(17);
  const Aabb& b = octree.bounds();
  os << octree.resolution() << " " << octree.maxDepth() << " " << b.min.x() << " " << b.min.y()
     << " " << b.min.z() << " " << b.max.x() << " " << b.max.y() << " " << b.max.z() << "\n";
  std::vector<VoxelKey> sorted(keys.begin(), keys.end());
  std::sort(sorted.begin(), sorted.end());
  for (const auto& k : sorted) os << k.ix << " " << k.iy << " " << k.iz << " free\n";
}

}  // namespace mrfe
