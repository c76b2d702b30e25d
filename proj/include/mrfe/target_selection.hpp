#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mrfe/occupancy_octree.hpp"
#include "mrfe/types.hpp"

namespace mrfe {

struct GainParams {
  double lambda = 0.1386;      // 1/meters, motion-cost weight
  double gain_cube_side = 20;  // meters, typically the sensor max range
};

/// One scored waypoint candidate. total_gain is info_gain / exp(lambda *
/// distance) as computed; log_gain carries the same ordering in log domain
/// (ln I - lambda * L, -inf for zero gain) so that selection stays exact
/// when exp(-lambda * L) underflows.
struct ScoredCandidate {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  double info_gain = 0.0;  // fraction of unknown voxels in the gain cube
  double distance = 0.0;   // meters from the robot
  double total_gain = 0.0;
  double log_gain = 0.0;
};

ScoredCandidate makeScoredCandidate(const Eigen::Vector3d& position, double info_gain,
                                    double distance, double lambda);

/// Share of unknown voxels in the gain cube centered on the candidate.
/// Throws std::out_of_range for out-of-bounds candidates (planner bug
/// upstream).
double informationGain(const OccupancyOctree& octree, const Eigen::Vector3d& candidate,
                       const GainParams& params);

/// Euclidean distance between the robot and the candidate.
double travelCost(const Eigen::Vector3d& robot, const Eigen::Vector3d& candidate);

/// info_gain * exp(-lambda * distance).
double totalGain(double info_gain, double distance, double lambda);

/// Lambda that makes the two candidate gains equal: ln(I2/I1) / (L2 - L1).
/// Throws std::invalid_argument for L1 == L2 or non-positive gains.
double lambdaFromPreference(double info_gain1, double info_gain2, double distance1,
                            double distance2);

std::vector<ScoredCandidate> scoreCandidates(const OccupancyOctree& octree,
                                             const Eigen::Vector3d& robot,
                                             const std::vector<Eigen::Vector3d>& candidates,
                                             const GainParams& params);

/// Total order on candidates, best first: higher gain, then smaller
/// distance, then lexicographically smaller position. Returns indices.
std::vector<std::size_t> rankCandidates(std::span<const ScoredCandidate> candidates);

/// Best candidate, or nothing when the list is empty or every candidate has
/// zero information gain (exploration-complete signal).
std::optional<ScoredCandidate> selectBest(std::span<const ScoredCandidate> candidates);

}  // namespace mrfe
