#include "mrfe/target_selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mrfe {

namespace {

bool candidateBefore(const ScoredCandidate& a, const ScoredCandidate& b) {
  if (a.log_gain != b.log_gain) return a.log_gain > b.log_gain;
  if (a.distance != b.distance) return a.distance < b.distance;
  if (a.position.x() != b.position.x()) return a.position.x() < b.position.x();
  if (a.position.y() != b.position.y()) return a.position.y() < b.position.y();
  return a.position.z() < b.position.z();
}

}  // namespace

ScoredCandidate makeScoredCandidate(const Eigen::Vector3d& position, double info_gain,
                                    double distance, double lambda) {
  ScoredCandidate c;
  c.position = position;
  c.info_gain = info_gain;
  c.distance = distance;
  c.total_gain = totalGain(info_gain, distance, lambda);
  c.log_gain = info_gain > 0.0 ? std::log(info_gain) - lambda * distance
                               : -std::numeric_limits<double>::infinity();
  return c;
}

double informationGain(const OccupancyOctree& octree, const Eigen::Vector3d& candidate,
                       const GainParams& params) {
  if (!octree.contains(candidate))
    throw std::out_of_range("informationGain: candidate outside bounds");
  return octree.unknownFractionInCube(candidate, params.gain_cube_side);
}

double travelCost(const Eigen::Vector3d& robot, const Eigen::Vector3d& candidate) {
  return (robot - candidate).norm();
}

double totalGain(double info_gain, double distance, double lambda) {
  return info_gain * std::exp(-lambda * distance);
}

double lambdaFromPreference(double info_gain1, double info_gain2, double distance1,
                            double distance2) {
  if (distance1 == distance2)
    throw std::invalid_argument("lambdaFromPreference: distances must differ");
  if (info_gain1 <= 0.0 || info_gain2 <= 0.0)
    throw std::invalid_argument("lambdaFromPreference: gains must be positive");
  return std::log(info_gain2 / info_gain1) / (distance2 - distance1);
}

std::vector<ScoredCandidate> scoreCandidates(const OccupancyOctree& octree,
                                             const Eigen::Vector3d& robot,
                                             const std::vector<Eigen::Vector3d>& candidates,
                                             const GainParams& params) {
  std::vector<ScoredCandidate> out;
  out.reserve(candidates.size());
  for (const auto& pos : candidates) {
    const double gain = informationGain(octree, pos, params);
    out.push_back(makeScoredCandidate(pos, gain, travelCost(robot, pos), params.lambda));
  }
  return out;
}

std::vector<std::size_t> rankCandidates(std::span<const ScoredCandidate> candidates) {
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return candidateBefore(candidates[a], candidates[b]);
  });
  return order;
}

std::optional<ScoredCandidate> selectBest(std::span<const ScoredCandidate> candidates) {
  if (candidates.empty()) return std::nullopt;
  const ScoredCandidate* best = nullptr;
  for (const auto& c : candidates) {
    if (best == nullptr || candidateBefore(c, *best)) best = &c;
  }
  if (best->info_gain <= 0.0) return std::nullopt;  // all gains zero
  return *best;
}

}  // namespace mrfe
