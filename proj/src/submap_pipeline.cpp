#include "mrfe/submap_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mrfe {

SubmapAccumulator::SubmapAccumulator(int scans_per_submap, double cell_size,
                                     const Eigen::Vector3d& grid_origin)
    : scans_per_submap_(scans_per_submap), cell_size_(cell_size), grid_origin_(grid_origin) {
  if (scans_per_submap < 1)
    throw std::invalid_argument("SubmapAccumulator: scans_per_submap must be >= 1");
  if (cell_size <= 0.0)
    throw std::invalid_argument("SubmapAccumulator: cell_size must be positive");
}

std::optional<SubmapCloud> SubmapAccumulator::accumulateScan(const LidarScan& scan) {
  for (const auto& p : scan.points) {
    VoxelKey cell;
    cell.ix = static_cast<std::int32_t>(std::floor((p.x() - grid_origin_.x()) / cell_size_));
    cell.iy = static_cast<std::int32_t>(std::floor((p.y() - grid_origin_.y()) / cell_size_));
    cell.iz = static_cast<std::int32_t>(std::floor((p.z() - grid_origin_.z()) / cell_size_));
    occupied_cells_.insert(cell);
  }
  origins_.push_back(scan.origin);

  if (static_cast<int>(origins_.size()) < scans_per_submap_) return std::nullopt;

  SubmapCloud cloud;
  cloud.source_submap_index = completed_;
  cloud.scan_origins = origins_;
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  for (const auto& o : origins_) sum += o;
  cloud.mean_origin = sum / static_cast<double>(origins_.size());

  cloud.points.reserve(occupied_cells_.size());
  for (const auto& cell : occupied_cells_) {
    cloud.points.push_back(grid_origin_ + cell_size_ * Eigen::Vector3d(cell.ix + 0.5,
                                                                       cell.iy + 0.5,
                                                                       cell.iz + 0.5));
  }
  std::sort(cloud.points.begin(), cloud.points.end(),
            [](const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
              if (a.x() != b.x()) return a.x() < b.x();
              if (a.y() != b.y()) return a.y() < b.y();
              return a.z() < b.z();
            });

  occupied_cells_.clear();
  origins_.clear();
  ++completed_;
  return cloud;
}

std::vector<LidarScan> loadScans(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("loadScans: cannot open '" + path + "'");

  std::vector<LidarScan> scans;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw std::runtime_error("loadScans: " + path + ":" + std::to_string(line_no) + ": " + what);
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream hs(line);
    std::string tag;
    LidarScan scan;
    std::size_t n = 0;
    hs >> tag;
    if (tag != "SCAN") fail("expected 'SCAN' header");
    if (!(hs >> scan.index >> scan.origin.x() >> scan.origin.y() >> scan.origin.z() >> n))
      fail("malformed scan header");

    scan.points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::getline(in, line)) {
        ++line_no;
        fail("unexpected end of file inside scan block");
      }
      ++line_no;
      std::istringstream ps(line);
      Eigen::Vector3d p;
      if (!(ps >> p.x() >> p.y() >> p.z())) fail("malformed point line");
      scan.points.push_back(p);
    }
    scans.push_back(std::move(scan));
  }
  return scans;
}

void saveScans(const std::string& path, const std::vector<LidarScan>& scans) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("saveScans: cannot open '" + path + "'");
  char buf[128];
  for (const auto& scan : scans) {
    std::snprintf(buf, sizeof(buf), "SCAN %d %.6f %.6f %.6f %zu\n", scan.index, scan.origin.x(),
                  scan.origin.y(), scan.origin.z(), scan.points.size());
    out << buf;
    for (const auto& p : scan.points) {
      std::snprintf(buf, sizeof(buf), "%.6f %.6f %.6f\n", p.x(), p.y(), p.z());
      out << buf;
    }
  }
  if (!out) throw std::runtime_error("saveScans: write failed for '" + path + "'");
}

}  // namespace mrfe
