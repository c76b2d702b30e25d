#include "mrfe/frontier_clustering.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>

namespace mrfe {

namespace {

// Above this point count the O(n^2) window search is replaced by a uniform
// grid; after parent coarsening the typical input stays well below it.
constexpr std::size_t kGridThreshold = 2000;

class RadiusNeighborIndex {
 public:
  RadiusNeighborIndex(const std::vector<Eigen::Vector3d>& pts, double cell)
      : pts_(pts), cell_(cell), use_grid_(pts.size() > kGridThreshold) {
    if (!use_grid_) return;
    cells_.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
      cells_[pack(cellOf(pts[i]))].push_back(static_cast<int>(i));
  }

  template <typename Fn>
  void forEachWithin(const Eigen::Vector3d& q, double radius, Fn&& fn) const {
    const double r2 = radius * radius;
    if (!use_grid_) {
      for (std::size_t j = 0; j < pts_.size(); ++j) {
        const double d2 = (pts_[j] - q).squaredNorm();
        if (d2 <= r2) fn(static_cast<int>(j), d2);
      }
      return;
    }
    const int reach = static_cast<int>(std::ceil(radius / cell_));
    const Eigen::Vector3i c = cellOf(q);
    for (int dz = -reach; dz <= reach; ++dz)
      for (int dy = -reach; dy <= reach; ++dy)
        for (int dx = -reach; dx <= reach; ++dx) {
          const auto it = cells_.find(pack(c + Eigen::Vector3i(dx, dy, dz)));
          if (it == cells_.end()) continue;
          for (int j : it->second) {
            const double d2 = (pts_[j] - q).squaredNorm();
            if (d2 <= r2) fn(j, d2);
          }
        }
  }

 private:
  Eigen::Vector3i cellOf(const Eigen::Vector3d& p) const {
    return Eigen::Vector3i(static_cast<int>(std::floor(p.x() / cell_)),
                           static_cast<int>(std::floor(p.y() / cell_)),
                           static_cast<int>(std::floor(p.z() / cell_)));
  }

  static std::uint64_t pack(const Eigen::Vector3i& c) {
    const auto u = [](int v) { return static_cast<std::uint64_t>(static_cast<std::uint32_t>(v)); };
    return (u(c.x()) & 0x1FFFFF) | ((u(c.y()) & 0x1FFFFF) << 21) | ((u(c.z()) & 0x1FFFFF) << 42);
  }

  const std::vector<Eigen::Vector3d>& pts_;
  double cell_;
  bool use_grid_;
  std::unordered_map<std::uint64_t, std::vector<int>> cells_;
};

void validate(const ExplorationConfig& cfg) {
  if (cfg.bandwidth <= 0.0)
    throw std::invalid_argument("meanShift: bandwidth must be positive");
  if (cfg.convergence_tol <= 0.0)
    throw std::invalid_argument("meanShift: convergence_tol must be positive");
  if (cfg.max_iterations < 1)
    throw std::invalid_argument("meanShift: max_iterations must be >= 1");
}

}  // namespace

ExplorationConfig makeExplorationConfig(const OccupancyOctree& octree, int d_exp,
                                        double bandwidth) {
  if (d_exp < 1 || d_exp > octree.maxDepth())
    throw std::invalid_argument("makeExplorationConfig: d_exp must be in [1, d_max]");
  ExplorationConfig cfg;
  cfg.d_exp = d_exp;
  cfg.bandwidth = bandwidth;
  cfg.convergence_tol = octree.edgeLength(d_exp) / 100.0;
  return cfg;
}

std::vector<VoxelKey> clusterToDepth(const VoxelKeySet& global_frontier, int d_exp) {
  VoxelKeySet parents;
  parents.reserve(global_frontier.size());
  for (const auto& k : global_frontier) parents.insert(OccupancyOctree::parentKey(k, d_exp));
  std::vector<VoxelKey> out(parents.begin(), parents.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<VoxelKey> clusterToDepth(const std::vector<VoxelKey>& global_frontier, int d_exp) {
  VoxelKeySet tmp(global_frontier.begin(), global_frontier.end());
  return clusterToDepth(tmp, d_exp);
}

MeanShiftResult meanShift(const std::vector<Eigen::Vector3d>& points,
                          const ExplorationConfig& config) {
  validate(config);
  MeanShiftResult result;
  if (points.empty()) return result;

  const double h = config.bandwidth;
  // The Gaussian kernel is effectively zero past 3 bandwidths.
  const double query_radius = config.kernel == ExplorationConfig::Kernel::Flat ? h : 3.0 * h;
  const RadiusNeighborIndex index(points, h);

  std::vector<Eigen::Vector3d> modes(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    Eigen::Vector3d m = points[i];
    for (int iter = 0; iter < config.max_iterations; ++iter) {
      Eigen::Vector3d acc = Eigen::Vector3d::Zero();
      double wsum = 0.0;
      index.forEachWithin(m, query_radius, [&](int j, double d2) {
        double w = 1.0;
        if (config.kernel == ExplorationConfig::Kernel::Gaussian)
          w = std::exp(-0.5 * d2 / (h * h));
        acc += w * points[j];
        wsum += w;
      });
      if (wsum <= 0.0) break;  // isolated query point, cannot move
      const Eigen::Vector3d next = acc / wsum;
      const double shift = (next - m).norm();
      m = next;
      if (shift < config.convergence_tol) break;
    }
    modes[i] = m;
  }

  // Merge converged modes closer than bandwidth/2. Cluster centers are the
  // running mean of their member modes.
  const double merge2 = 0.25 * h * h;
  std::vector<Eigen::Vector3d> sums;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    int found = -1;
    for (std::size_t c = 0; c < result.modes.size(); ++c) {
      if ((result.modes[c] - modes[i]).squaredNorm() < merge2) {
        found = static_cast<int>(c);
        break;
      }
    }
    if (found < 0) {
      result.modes.push_back(modes[i]);
      result.members.push_back({static_cast<int>(i)});
      sums.push_back(modes[i]);
    } else {
      sums[found] += modes[i];
      result.members[found].push_back(static_cast<int>(i));
      result.modes[found] = sums[found] / static_cast<double>(result.members[found].size());
    }
  }
  return result;
}

CandidateSet clusterFrontier(const OccupancyOctree& octree, const VoxelKeySet& global_frontier,
                             const ExplorationConfig& config) {
  CandidateSet out;
  out.parents = clusterToDepth(global_frontier, config.d_exp);
  std::vector<Eigen::Vector3d> centers;
  centers.reserve(out.parents.size());
  // Clipped centers: boundary parents overhang the bounds, and candidates
  // must be valid in-map positions for gain evaluation and navigation.
  for (const auto& k : out.parents) centers.push_back(octree.clippedVoxelCenter(k));
  MeanShiftResult ms = meanShift(centers, config);
  out.candidates = std::move(ms.modes);
  out.members = std::move(ms.members);
  return out;
}

}  // namespace mrfe
