#pragma once

#include <Eigen/Core>

#include <compare>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace mrfe {

/// Tri-state occupancy of a voxel. Every voxel in bounds is in exactly one state.
enum class VoxelState : std::uint8_t { Free = 0, Occupied = 1, Unknown = 2 };

const char* toString(VoxelState s);

/// Address of a voxel: integer grid coordinates at a given octree depth.
/// The parent of (ix,iy,iz)@d is (ix>>1, iy>>1, iz>>1)@(d-1).
struct VoxelKey {
  std::int32_t ix = 0;
  std::int32_t iy = 0;
  std::int32_t iz = 0;
  std::int32_t depth = 0;

  friend bool operator==(const VoxelKey&, const VoxelKey&) = default;
  friend auto operator<=>(const VoxelKey&, const VoxelKey&) = default;
};

struct VoxelKeyHash {
  std::size_t operator()(const VoxelKey& k) const noexcept {
    std::uint64_t h = static_cast<std::uint32_t>(k.ix);
    h = h * 0x9E3779B97F4A7C15ull + static_cast<std::uint32_t>(k.iy);
    h = h * 0xC2B2AE3D27D4EB4Full + static_cast<std::uint32_t>(k.iz);
    h = h * 0x165667B19E3779F9ull + static_cast<std::uint32_t>(k.depth);
    h ^= h >> 29;
    h *= 0xBF58476D1CE4E5B9ull;
    h ^= h >> 32;
    return static_cast<std::size_t>(h);
  }
};

using VoxelKeySet = std::unordered_set<VoxelKey, VoxelKeyHash>;

template <typename T>
using VoxelKeyMap = std::unordered_map<VoxelKey, T, VoxelKeyHash>;

/// Axis-aligned box in meters. Point containment is half-open: [min, max).
struct Aabb {
  Eigen::Vector3d min = Eigen::Vector3d::Zero();
  Eigen::Vector3d max = Eigen::Vector3d::Zero();

  bool contains(const Eigen::Vector3d& p) const {
    return p.x() >= min.x() && p.x() < max.x() && p.y() >= min.y() && p.y() < max.y() &&
           p.z() >= min.z() && p.z() < max.z();
  }

  /// Strict interior test, used for ground-truth collision checks against solids.
  bool strictlyInside(const Eigen::Vector3d& p) const {
    return p.x() > min.x() && p.x() < max.x() && p.y() > min.y() && p.y() < max.y() &&
           p.z() > min.z() && p.z() < max.z();
  }

  Eigen::Vector3d extent() const { return max - min; }
  Eigen::Vector3d center() const { return 0.5 * (min + max); }
  double volume() const {
    const Eigen::Vector3d e = extent();
    return e.x() * e.y() * e.z();
  }
  bool valid() const { return (max.array() > min.array()).all(); }
};

std::string toString(const Aabb& box);

}  // namespace mrfe
