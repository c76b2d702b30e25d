#include "mrfe/occupancy_octree.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mrfe {

namespace {

int dominanceRank(VoxelState s) {
  switch (s) {
    case VoxelState::Free:
      return 0;
    case VoxelState::Unknown:
      return 1;
    case VoxelState::Occupied:
      return 2;
  }
  return 1;
}

VoxelState dominate(VoxelState a, VoxelState b) {
  return dominanceRank(a) >= dominanceRank(b) ? a : b;
}

}  // namespace

const char* toString(VoxelState s) {
  switch (s) {
    case VoxelState::Free:
      return "free";
    case VoxelState::Occupied:
      return "occupied";
    case VoxelState::Unknown:
      return "unknown";
  }
  return "unknown";
}

std::string toString(const Aabb& box) {
  std::ostringstream os;
  os << "[" << box.min.x() << "," << box.min.y() << "," << box.min.z() << " .. " << box.max.x()
     << "," << box.max.y() << "," << box.max.z() << "]";
  return os.str();
}

OccupancyOctree::OccupancyOctree(double resolution, const Aabb& bounds, int max_depth)
    : r_max_(resolution), d_max_(max_depth), bounds_(bounds) {
  if (resolution <= 0.0)
    throw std::invalid_argument("OccupancyOctree: resolution must be positive");
  if (max_depth < 1 || max_depth > 16)
    throw std::invalid_argument("OccupancyOctree: max_depth must be in [1,16]");
  if (!bounds.valid())
    throw std::invalid_argument("OccupancyOctree: bounds must have positive extent");

  const Eigen::Vector3d ext = bounds.extent();
  for (int a = 0; a < 3; ++a) {
    const auto n = static_cast<std::int64_t>(std::ceil(ext[a] / r_max_ - 1e-9));
    fine_dims_[a] = static_cast<std::int32_t>(std::max<std::int64_t>(1, n));
    if (fine_dims_[a] > (std::int64_t{1} << d_max_))
      throw std::invalid_argument(
          "OccupancyOctree: bounds too large for max_depth at this resolution");
  }

  fine_total_ = static_cast<std::size_t>(fine_dims_.x()) * fine_dims_.y() * fine_dims_.z();

  levels_.resize(d_max_ + 1);
  for (int d = 1; d <= d_max_; ++d) {
    const int shift = d_max_ - d;
    Level& lvl = levels_[d];
    for (int a = 0; a < 3; ++a)
      lvl.dims[a] = (fine_dims_[a] + (1 << shift) - 1) >> shift;
    lvl.states.assign(
        static_cast<std::size_t>(lvl.dims.x()) * lvl.dims.y() * lvl.dims.z(),
        static_cast<std::uint8_t>(VoxelState::Unknown));
  }
}

bool OccupancyOctree::inBounds(const VoxelKey& key) const {
  if (key.depth < 1 || key.depth > d_max_) return false;
  const Level& lvl = levels_[key.depth];
  return key.ix >= 0 && key.iy >= 0 && key.iz >= 0 && key.ix < lvl.dims.x() &&
         key.iy < lvl.dims.y() && key.iz < lvl.dims.z();
}

VoxelKey OccupancyOctree::keyAtPoint(const Eigen::Vector3d& p, int depth) const {
  if (!bounds_.contains(p))
    throw std::out_of_range("keyAtPoint: point outside bounds");
  if (depth < 1 || depth > d_max_)
    throw std::out_of_range("keyAtPoint: depth out of range");
  const double edge = edgeLength(depth);
  VoxelKey key;
  key.depth = depth;
  key.ix = static_cast<std::int32_t>(std::floor((p.x() - bounds_.min.x()) / edge));
  key.iy = static_cast<std::int32_t>(std::floor((p.y() - bounds_.min.y()) / edge));
  key.iz = static_cast<std::int32_t>(std::floor((p.z() - bounds_.min.z()) / edge));
  const Level& lvl = levels_[depth];
  key.ix = std::clamp(key.ix, 0, lvl.dims.x() - 1);
  key.iy = std::clamp(key.iy, 0, lvl.dims.y() - 1);
  key.iz = std::clamp(key.iz, 0, lvl.dims.z() - 1);
  return key;
}

Eigen::Vector3d OccupancyOctree::voxelCenter(const VoxelKey& key) const {
  const double edge = edgeLength(key.depth);
  return bounds_.min + edge * Eigen::Vector3d(key.ix + 0.5, key.iy + 0.5, key.iz + 0.5);
}

Eigen::Vector3d OccupancyOctree::clippedVoxelCenter(const VoxelKey& key) const {
  const double edge = edgeLength(key.depth);
  const Eigen::Vector3d coords(key.ix, key.iy, key.iz);
  Eigen::Vector3d center;
  for (int a = 0; a < 3; ++a) {
    const double vmin = bounds_.min[a] + edge * coords[a];
    const double vmax = std::min(vmin + edge, bounds_.max[a]);
    center[a] = 0.5 * (vmin + vmax);
  }
  return center;
}

double OccupancyOctree::edgeLength(int depth) const {
  if (depth < 1 || depth > d_max_)
    throw std::out_of_range("edgeLength: depth out of range");
  return r_max_ * static_cast<double>(std::int64_t{1} << (d_max_ - depth));
}

VoxelState OccupancyOctree::stateAt(const VoxelKey& key) const {
  if (!inBounds(key))
    throw std::out_of_range("stateAt: key outside bounds");
  const Level& lvl = levels_[key.depth];
  return static_cast<VoxelState>(lvl.states[linIndex(lvl, key.ix, key.iy, key.iz)]);
}

VoxelKey OccupancyOctree::parentKey(const VoxelKey& key, int target_depth) {
  if (target_depth > key.depth || target_depth < 1)
    throw std::invalid_argument("parentKey: target_depth must be in [1, key.depth]");
  const int shift = key.depth - target_depth;
  return VoxelKey{key.ix >> shift, key.iy >> shift, key.iz >> shift, target_depth};
}

VoxelState OccupancyOctree::combineChildren(int depth, std::int32_t x, std::int32_t y,
                                            std::int32_t z) const {
  const Level& child = levels_[depth + 1];
  VoxelState acc = VoxelState::Free;
  bool any = false;
  for (int dz = 0; dz < 2; ++dz) {
    const std::int32_t cz = 2 * z + dz;
    if (cz >= child.dims.z()) continue;
    for (int dy = 0; dy < 2; ++dy) {
      const std::int32_t cy = 2 * y + dy;
      if (cy >= child.dims.y()) continue;
      for (int dx = 0; dx < 2; ++dx) {
        const std::int32_t cx = 2 * x + dx;
        if (cx >= child.dims.x()) continue;
        acc = any ? dominate(acc, static_cast<VoxelState>(
                                      child.states[linIndex(child, cx, cy, cz)]))
                  : static_cast<VoxelState>(child.states[linIndex(child, cx, cy, cz)]);
        any = true;
      }
    }
  }
  return any ? acc : VoxelState::Unknown;
}

void OccupancyOctree::assignFine(std::int32_t x, std::int32_t y, std::int32_t z, VoxelState s) {
  Level& fine = levels_[d_max_];
  const std::size_t lin = linIndex(fine, x, y, z);
  const auto old = static_cast<VoxelState>(fine.states[lin]);
  if (old == s) return;

  if (old == VoxelState::Free) --free_count_;
  if (old == VoxelState::Occupied) --occupied_count_;
  if (s == VoxelState::Free) ++free_count_;
  if (s == VoxelState::Occupied) ++occupied_count_;
  fine.states[lin] = static_cast<std::uint8_t>(s);

  std::int32_t cx = x, cy = y, cz = z;
  for (int d = d_max_ - 1; d >= 1; --d) {
    cx >>= 1;
    cy >>= 1;
    cz >>= 1;
    Level& lvl = levels_[d];
    const std::size_t plin = linIndex(lvl, cx, cy, cz);
    const VoxelState summary = combineChildren(d, cx, cy, cz);
    if (lvl.states[plin] == static_cast<std::uint8_t>(summary)) break;
    lvl.states[plin] = static_cast<std::uint8_t>(summary);
  }
}

bool OccupancyOctree::setState(const VoxelKey& fine_key, VoxelState s) {
  if (fine_key.depth != d_max_)
    throw std::invalid_argument("setState: key must be at finest depth");
  if (!inBounds(fine_key))
    throw std::out_of_range("setState: key outside bounds");
  const VoxelState old = fineState(fine_key.ix, fine_key.iy, fine_key.iz);
  if (old == s) return false;
  assignFine(fine_key.ix, fine_key.iy, fine_key.iz, s);
  return true;
}

namespace {

// Amanatides-Woo stepping over the fine grid from `from` toward `to`,
// visiting every traversed voxel except the one containing `to`.
template <typename Fn>
void walkRayExclusive(const Eigen::Vector3d& from, const Eigen::Vector3d& to,
                      const Eigen::Vector3d& grid_min, double edge,
                      const Eigen::Vector3i& dims, Fn&& visit) {
  Eigen::Vector3i cur, end;
  for (int a = 0; a < 3; ++a) {
    cur[a] = std::clamp(static_cast<std::int32_t>(std::floor((from[a] - grid_min[a]) / edge)), 0,
                        dims[a] - 1);
    end[a] = std::clamp(static_cast<std::int32_t>(std::floor((to[a] - grid_min[a]) / edge)), 0,
                        dims[a] - 1);
  }
  if (cur == end) return;

  const Eigen::Vector3d dir = to - from;
  Eigen::Vector3i step = Eigen::Vector3i::Zero();
  Eigen::Vector3d t_max, t_delta;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    if (dir[a] > 0.0) {
      step[a] = 1;
      const double next_boundary = grid_min[a] + (cur[a] + 1) * edge;
      t_max[a] = (next_boundary - from[a]) / dir[a];
      t_delta[a] = edge / dir[a];
    } else if (dir[a] < 0.0) {
      step[a] = -1;
      const double next_boundary = grid_min[a] + cur[a] * edge;
      t_max[a] = (next_boundary - from[a]) / dir[a];
      t_delta[a] = -edge / dir[a];
    } else {
      t_max[a] = kInf;
      t_delta[a] = kInf;
    }
  }

  const std::int64_t guard =
      std::abs(end.x() - cur.x()) + std::abs(end.y() - cur.y()) + std::abs(end.z() - cur.z()) + 3;
  for (std::int64_t i = 0; i < guard && cur != end; ++i) {
    visit(cur);
    int axis = 0;
    if (t_max.y() < t_max[axis]) axis = 1;
    if (t_max.z() < t_max[axis]) axis = 2;
    cur[axis] += step[axis];
    t_max[axis] += t_delta[axis];
  }
}

}  // namespace

ChangeSet OccupancyOctree::integrateCloud(const std::vector<Eigen::Vector3d>& points,
                                          const Eigen::Vector3d& sensor_origin) {
  if (!contains(sensor_origin))
    throw std::invalid_argument("integrateCloud: sensor origin outside bounds");

  VoxelKeyMap<VoxelState> original;
  auto remember = [&](std::int32_t x, std::int32_t y, std::int32_t z) {
    original.emplace(VoxelKey{x, y, z, d_max_}, fineState(x, y, z));
  };

  std::vector<const Eigen::Vector3d*> valid;
  valid.reserve(points.size());
  for (const auto& p : points) {
    if (!contains(p)) {
      ++skipped_points_;
      continue;
    }
    valid.push_back(&p);
  }

  // Two passes keep the result independent of point order: free-space
  // carving first, endpoints afterwards so "occupied wins" within one cloud.
  for (const auto* p : valid) {
    walkRayExclusive(sensor_origin, *p, bounds_.min, r_max_, fine_dims_,
                     [&](const Eigen::Vector3i& v) {
                       if (fineState(v.x(), v.y(), v.z()) == VoxelState::Unknown) {
                         remember(v.x(), v.y(), v.z());
                         assignFine(v.x(), v.y(), v.z(), VoxelState::Free);
                       }
                     });
  }
  for (const auto* p : valid) {
    const VoxelKey k = keyAtPoint(*p);
    if (fineState(k.ix, k.iy, k.iz) != VoxelState::Occupied) {
      remember(k.ix, k.iy, k.iz);
      assignFine(k.ix, k.iy, k.iz, VoxelState::Occupied);
    }
  }

  ChangeSet changes;
  changes.reserve(original.size());
  for (const auto& [key, old_state] : original) {
    if (fineState(key.ix, key.iy, key.iz) != old_state) changes.push_back(key);
  }
  std::sort(changes.begin(), changes.end());
  ++revision_;
  return changes;
}

double OccupancyOctree::unknownFractionInCube(const Eigen::Vector3d& center, double side) const {
  if (side <= 0.0)
    throw std::invalid_argument("unknownFractionInCube: side must be positive");

  const double half = 0.5 * side;
  Eigen::Vector3i lo, hi;
  for (int a = 0; a < 3; ++a) {
    // Finest voxel centers are at min + (i + 0.5) * r_max.
    const double flo = (center[a] - half - bounds_.min[a]) / r_max_ - 0.5;
    const double fhi = (center[a] + half - bounds_.min[a]) / r_max_ - 0.5;
    lo[a] = static_cast<std::int32_t>(std::ceil(flo - 1e-9));
    hi[a] = static_cast<std::int32_t>(std::floor(fhi + 1e-9));
    lo[a] = std::max(lo[a], 0);
    hi[a] = std::min(hi[a], fine_dims_[a] - 1);
    if (lo[a] > hi[a]) return 0.0;
  }

  const Level& fine = levels_[d_max_];
  std::size_t unknown = 0, total = 0;
  for (std::int32_t z = lo.z(); z <= hi.z(); ++z) {
    for (std::int32_t y = lo.y(); y <= hi.y(); ++y) {
      const std::size_t row = linIndex(fine, lo.x(), y, z);
      for (std::int32_t x = 0; x <= hi.x() - lo.x(); ++x) {
        if (static_cast<VoxelState>(fine.states[row + x]) == VoxelState::Unknown) ++unknown;
      }
      total += static_cast<std::size_t>(hi.x() - lo.x() + 1);
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(unknown) / static_cast<double>(total);
}

VolumeFractions OccupancyOctree::volumeFractions() const {
  VolumeFractions f;
  const auto total = static_cast<double>(fine_total_);
  f.free_frac = static_cast<double>(free_count_) / total;
  f.occupied_frac = static_cast<double>(occupied_count_) / total;
  f.unknown_frac = static_cast<double>(fine_total_ - free_count_ - occupied_count_) / total;
  return f;
}

void OccupancyOctree::exportSnapshot(std::ostream& os) const {
  os.precision(17);
  os << r_max_ << " " << d_max_ << " " << bounds_.min.x() << " " << bounds_.min.y() << " "
     << bounds_.min.z() << " " << bounds_.max.x() << " " << bounds_.max.y() << " "
     << bounds_.max.z() << "\n";
  const Level& fine = levels_[d_max_];
  std::size_t lin = 0;
  for (std::int32_t z = 0; z < fine.dims.z(); ++z)
    for (std::int32_t y = 0; y < fine.dims.y(); ++y)
      for (std::int32_t x = 0; x < fine.dims.x(); ++x, ++lin) {
        const auto s = static_cast<VoxelState>(fine.states[lin]);
        if (s != VoxelState::Unknown)
          os << x << " " << y << " " << z << " " << toString(s) << "\n";
      }
}

OccupancyOctree OccupancyOctree::importSnapshot(std::istream& is) {
  double r = 0.0;
  int d_max = 0;
  Aabb box;
  if (!(is >> r >> d_max >> box.min.x() >> box.min.y() >> box.min.z() >> box.max.x() >>
        box.max.y() >> box.max.z()))
    throw std::runtime_error("importSnapshot: malformed header");

  OccupancyOctree tree(r, box, d_max);
  std::int32_t x = 0, y = 0, z = 0;
  std::string word;
  while (is >> x >> y >> z >> word) {
    VoxelState s;
    if (word == "free")
      s = VoxelState::Free;
    else if (word == "occupied")
      s = VoxelState::Occupied;
    else
      throw std::runtime_error("importSnapshot: unknown state token '" + word + "'");
    tree.setState(VoxelKey{x, y, z, d_max}, s);
  }
  return tree;
}

}  // namespace mrfe
