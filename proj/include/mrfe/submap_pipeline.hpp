#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mrfe/types.hpp"

namespace mrfe {

/// One lidar sweep: endpoints in the world frame plus the sensor position.
struct LidarScan {
  std::vector<Eigen::Vector3d> points;
  Eigen::Vector3d origin = Eigen::Vector3d::Zero();
  int index = 0;
};

/// Point cloud of one completed submap: one point per occupied submap cell,
/// at the cell center. Immutable once emitted.
struct SubmapCloud {
  std::vector<Eigen::Vector3d> points;
  int source_submap_index = 0;
  /// Mean of the contributing scans' sensor origins; the octree carves free
  /// space along rays from here to each point.
  Eigen::Vector3d mean_origin = Eigen::Vector3d::Zero();
  /// Per-scan origins, kept so a per-scan ray mode can be validated against
  /// the single-origin mode.
  std::vector<Eigen::Vector3d> scan_origins;
};

/// Batches consecutive scans into submaps of `scans_per_submap` scans each
/// and emits the completed submap's cloud. Cells are axis-aligned cubes of
/// `cell_size` anchored at `grid_origin`; endpoints rasterize into cells
/// with set semantics, so revisited cells contribute one point.
class SubmapAccumulator {
 public:
  SubmapAccumulator(int scans_per_submap, double cell_size, const Eigen::Vector3d& grid_origin);

  /// Feeds one scan. Returns the completed submap's cloud when this scan is
  /// the last of the current submap, nothing otherwise. Empty scans are
  /// accepted and contribute no cells.
  std::optional<SubmapCloud> accumulateScan(const LidarScan& scan);

  int scansPerSubmap() const { return scans_per_submap_; }
  double cellSize() const { return cell_size_; }
  int completedSubmaps() const { return completed_; }
  int scansInCurrentSubmap() const { return static_cast<int>(origins_.size()); }

 private:
  int scans_per_submap_;
  double cell_size_;
  Eigen::Vector3d grid_origin_;
  VoxelKeySet occupied_cells_;  // depth field unused, fixed 0
  std::vector<Eigen::Vector3d> origins_;
  int completed_ = 0;
};

/// Replay file I/O. Format: one scan per block, header `SCAN k ox oy oz n`
/// followed by n lines `x y z` (meters, 6 decimal places).
std::vector<LidarScan> loadScans(const std::string& path);
void saveScans(const std::string& path, const std::vector<LidarScan>& scans);

}  // namespace mrfe
