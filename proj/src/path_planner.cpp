#include "mrfe/path_planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace mrfe {

namespace {

std::size_t lin(const Eigen::Vector3i& dims, std::int32_t x, std::int32_t y, std::int32_t z) {
  return (static_cast<std::size_t>(z) * dims.y() + y) * dims.x() + x;
}

}  // namespace

TraversabilityMap::TraversabilityMap(const OccupancyOctree& octree, double safety_margin,
                                     bool avoid_unknown_adjacent)
    : dims_(octree.fineDims()) {
  const std::size_t total = static_cast<std::size_t>(dims_.x()) * dims_.y() * dims_.z();
  blocked_.assign(total, 0);
  free_.assign(total, 0);

  octree.forEachFineVoxel(VoxelState::Free, [&](const VoxelKey& k) {
    free_[lin(dims_, k.ix, k.iy, k.iz)] = 1;
  });

  if (avoid_unknown_adjacent) {
    octree.forEachFineVoxel(VoxelState::Unknown, [&](const VoxelKey& k) {
      static const std::int32_t offs[6][3] = {{1, 0, 0},  {-1, 0, 0}, {0, 1, 0},
                                              {0, -1, 0}, {0, 0, 1},  {0, 0, -1}};
      for (const auto& o : offs) {
        const std::int32_t x = k.ix + o[0], y = k.iy + o[1], z = k.iz + o[2];
        if (x < 0 || y < 0 || z < 0 || x >= dims_.x() || y >= dims_.y() || z >= dims_.z())
          continue;
        blocked_[lin(dims_, x, y, z)] = 1;
      }
    });
  }

  // Dilate occupied voxels by the margin, measured center to center.
  const double r = octree.resolution();
  const int reach = static_cast<int>(std::floor(safety_margin / r + 1e-9));
  const double margin2 = safety_margin * safety_margin;
  octree.forEachFineVoxel(VoxelState::Occupied, [&](const VoxelKey& k) {
    for (int dz = -reach; dz <= reach; ++dz) {
      const std::int32_t z = k.iz + dz;
      if (z < 0 || z >= dims_.z()) continue;
      for (int dy = -reach; dy <= reach; ++dy) {
        const std::int32_t y = k.iy + dy;
        if (y < 0 || y >= dims_.y()) continue;
        for (int dx = -reach; dx <= reach; ++dx) {
          const std::int32_t x = k.ix + dx;
          if (x < 0 || x >= dims_.x()) continue;
          const double d2 = (dx * dx + dy * dy + dz * dz) * r * r;
          if (d2 <= margin2) blocked_[lin(dims_, x, y, z)] = 1;
        }
      }
    }
  });
}

bool TraversabilityMap::traversable(std::int32_t x, std::int32_t y, std::int32_t z) const {
  if (x < 0 || y < 0 || z < 0 || x >= dims_.x() || y >= dims_.y() || z >= dims_.z()) return false;
  const std::size_t i = lin(dims_, x, y, z);
  return free_[i] != 0 && blocked_[i] == 0;
}

bool lineOfSight(const OccupancyOctree& octree, const TraversabilityMap& map,
                 const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  const double r = octree.resolution();
  const Eigen::Vector3d d = b - a;
  const double len = d.norm();
  if (len == 0.0) return true;
  // Sample at sub-voxel spacing; conservative and simple compared to an
  // exact supercover walk, and the planner only uses it to drop waypoints.
  const int steps = static_cast<int>(std::ceil(len / (0.25 * r)));
  const VoxelKey start_key = octree.keyAtPoint(a);
  for (int i = 1; i <= steps; ++i) {
    const Eigen::Vector3d p = a + d * (static_cast<double>(i) / steps);
    if (!octree.contains(p)) return false;
    const VoxelKey k = octree.keyAtPoint(p);
    if (k == start_key) continue;
    if (!map.traversable(k)) return false;
  }
  return true;
}

std::optional<VoxelKey> nearestTraversableVoxel(const OccupancyOctree& octree,
                                                const TraversabilityMap& map,
                                                const Eigen::Vector3d& near, double radius) {
  const double r = octree.resolution();
  Eigen::Vector3d anchor = near;
  for (int a = 0; a < 3; ++a)
    anchor[a] = std::clamp(anchor[a], octree.bounds().min[a] + 0.5 * r,
                           octree.bounds().max[a] - 0.5 * r);
  const VoxelKey center = octree.keyAtPoint(anchor);

  const int reach = std::max(1, static_cast<int>(std::ceil(radius / r)));
  double best_d2 = std::numeric_limits<double>::infinity();
  VoxelKey best{};
  bool found = false;
  for (int dz = -reach; dz <= reach; ++dz)
    for (int dy = -reach; dy <= reach; ++dy)
      for (int dx = -reach; dx <= reach; ++dx) {
        const VoxelKey k{center.ix + dx, center.iy + dy, center.iz + dz, center.depth};
        if (!map.traversable(k)) continue;
        const double d2 = (octree.voxelCenter(k) - near).squaredNorm();
        if (!found || d2 < best_d2 - 1e-12 ||
            (std::abs(d2 - best_d2) <= 1e-12 && k < best)) {
          best_d2 = d2;
          best = k;
          found = true;
        }
      }
  if (!found || best_d2 > radius * radius) return std::nullopt;
  return best;
}

std::optional<std::vector<Eigen::Vector3d>> planPath(const OccupancyOctree& octree,
                                                     const Eigen::Vector3d& start,
                                                     const Eigen::Vector3d& goal,
                                                     double safety_margin,
                                                     double goal_clamp_radius) {
  const VoxelKey start_key = octree.keyAtPoint(start);
  if (octree.stateAt(start_key) == VoxelState::Occupied)
    throw std::invalid_argument("planPath: start voxel is occupied");
  if (octree.contains(goal) && octree.keyAtPoint(goal) == start_key)
    return std::vector<Eigen::Vector3d>{start};

  const TraversabilityMap map(octree, safety_margin, /*avoid_unknown_adjacent=*/true);
  const Eigen::Vector3i dims = map.dims();
  const double r = octree.resolution();

  // Clamp the goal to the nearest traversable voxel when needed.
  VoxelKey goal_key;
  if (octree.contains(goal) && map.traversable(octree.keyAtPoint(goal))) {
    goal_key = octree.keyAtPoint(goal);
  } else {
    const auto clamped = nearestTraversableVoxel(octree, map, goal, goal_clamp_radius);
    if (!clamped) return std::nullopt;
    goal_key = *clamped;
  }

  if (start_key == goal_key) return std::vector<Eigen::Vector3d>{start};

  // 26-connected A*, Euclidean step costs, deterministic tie-breaking.
  const std::size_t total = static_cast<std::size_t>(dims.x()) * dims.y() * dims.z();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> g_cost(total, kInf);
  std::vector<std::int32_t> came_from(total, -1);
  std::vector<std::uint8_t> closed(total, 0);

  auto heuristic = [&](std::int32_t x, std::int32_t y, std::int32_t z) {
    return r * std::sqrt(static_cast<double>((x - goal_key.ix) * (x - goal_key.ix) +
                                             (y - goal_key.iy) * (y - goal_key.iy) +
                                             (z - goal_key.iz) * (z - goal_key.iz)));
  };

  struct Node {
    double f;
    double g;
    std::size_t idx;
    bool operator>(const Node& o) const {
      if (f != o.f) return f > o.f;
      if (g != o.g) return g < o.g;  // prefer larger g (deeper) on equal f
      return idx > o.idx;
    }
  };
  std::priority_queue<Node, std::vector<Node>, std::greater<Node>> open;

  const std::size_t start_idx = lin(dims, start_key.ix, start_key.iy, start_key.iz);
  const std::size_t goal_idx = lin(dims, goal_key.ix, goal_key.iy, goal_key.iz);
  g_cost[start_idx] = 0.0;
  open.push({heuristic(start_key.ix, start_key.iy, start_key.iz), 0.0, start_idx});

  auto decode = [&](std::size_t idx) {
    const std::int32_t x = static_cast<std::int32_t>(idx % dims.x());
    const std::int32_t y = static_cast<std::int32_t>((idx / dims.x()) % dims.y());
    const std::int32_t z = static_cast<std::int32_t>(idx / (static_cast<std::size_t>(dims.x()) * dims.y()));
    return Eigen::Vector3i(x, y, z);
  };

  bool reached = false;
  while (!open.empty()) {
    const Node cur = open.top();
    open.pop();
    if (closed[cur.idx]) continue;
    closed[cur.idx] = 1;
    if (cur.idx == goal_idx) {
      reached = true;
      break;
    }
    const Eigen::Vector3i c = decode(cur.idx);
    for (int dz = -1; dz <= 1; ++dz)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0 && dz == 0) continue;
          const std::int32_t nx = c.x() + dx, ny = c.y() + dy, nz = c.z() + dz;
          if (!map.traversable(nx, ny, nz)) continue;
          const std::size_t nidx = lin(dims, nx, ny, nz);
          if (closed[nidx]) continue;
          const double step = r * std::sqrt(static_cast<double>(dx * dx + dy * dy + dz * dz));
          const double ng = cur.g + step;
          if (ng < g_cost[nidx]) {
            g_cost[nidx] = ng;
            came_from[nidx] = static_cast<std::int32_t>(cur.idx);
            open.push({ng + heuristic(nx, ny, nz), ng, nidx});
          }
        }
  }
  if (!reached) return std::nullopt;

  std::vector<Eigen::Vector3d> path;
  for (std::size_t idx = goal_idx;;) {
    const Eigen::Vector3i c = decode(idx);
    path.push_back(octree.voxelCenter(VoxelKey{c.x(), c.y(), c.z(), octree.maxDepth()}));
    if (idx == start_idx) break;
    idx = static_cast<std::size_t>(came_from[idx]);
  }
  path.push_back(start);
  std::reverse(path.begin(), path.end());

  // Greedy line-of-sight shortcutting; keeps the polyline near-Euclidean in
  // open space and drops stair-step waypoints.
  std::vector<Eigen::Vector3d> smooth;
  smooth.push_back(path.front());
  std::size_t i = 0;
  while (i + 1 < path.size()) {
    std::size_t j = path.size() - 1;
    for (; j > i + 1; --j) {
      if (lineOfSight(octree, map, path[i], path[j])) break;
    }
    smooth.push_back(path[j]);
    i = j;
  }
  return smooth;
}

}  // namespace mrfe
