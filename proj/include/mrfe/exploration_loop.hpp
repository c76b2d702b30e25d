#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mrfe/frontier_detection.hpp"
#include "mrfe/occupancy_octree.hpp"
#include "mrfe/scenario.hpp"
#include "mrfe/submap_pipeline.hpp"
#include "mrfe/target_selection.hpp"

namespace mrfe {

/// Per-waypoint planner iteration record: frontier/cluster sizes, phase
/// timings (seconds), and the chosen target.
struct IterationMetrics {
  int iteration = 0;
  std::size_t global_frontier = 0;   // |F_g|
  std::size_t local_frontier = 0;    // |F_l| of the latest submap
  std::size_t parents = 0;           // |F_exp|
  std::size_t candidates = 0;        // |F_c|
  double t_octree_update = 0.0;      // accumulated since the previous iteration
  double t_frontier_detect = 0.0;    // accumulated since the previous iteration
  double t_cluster = 0.0;
  double t_select = 0.0;
  double t_total = 0.0;
  Eigen::Vector3d target = Eigen::Vector3d::Zero();
  double target_gain = 0.0;
  std::vector<ScoredCandidate> scored;  // in candidate order
  int chosen_index = -1;                // index into scored
};

struct VolumeSample {
  double sim_time = 0.0;
  double free_frac = 0.0;
  double occupied_frac = 0.0;
  double unknown_frac = 0.0;
};

struct RunSummary {
  std::string termination_reason;  // frontier_empty | no_positive_gain |
                                   // all_unreachable | sim_time_cap |
                                   // wall_clock_cap | replay_end
  double sim_time = 0.0;
  int iterations = 0;
  std::size_t collision_count = 0;
  double free_frac = 0.0;
  double occupied_frac = 0.0;
  double unknown_frac = 0.0;
  double mean_planner_time = 0.0;   // mean of per-iteration t_total
  double stdev_planner_time = 0.0;  // sample standard deviation
  double wall_time = 0.0;
};

struct MetricsLog {
  std::vector<IterationMetrics> iterations;
  std::vector<VolumeSample> volumes;
  std::vector<Eigen::Vector3d> chosen_targets;
  RunSummary summary;
};

struct RunOptions {
  double wall_clock_cap_s = 0.0;       // 0 disables the guard
  double volume_sample_period = 1.0;   // simulated seconds
  /// Streamed as rows are produced, before the run finishes.
  std::function<void(const IterationMetrics&)> on_iteration;
  std::function<void(const VolumeSample&)> on_volume;
  /// Fired at each waypoint arrival with the frozen planner state.
  std::function<void(int iteration, const OccupancyOctree&, const FrontierSet&)> on_waypoint;
  /// Every simulated scan as it is emitted (scan recording).
  std::function<void(const LidarScan&)> on_scan;
};

/// Runs the full exploration loop on the scenario: fly the current path,
/// emit scans at the sensor rate, integrate each completed submap and update
/// the frontier, and on every waypoint arrival cluster + score + select the
/// next target. Terminates when the global frontier is empty, no candidate
/// has positive gain, every candidate is unreachable, or a time guard trips.
MetricsLog runExploration(const Scenario& scenario, const RunOptions& options = {});

/// Replays recorded scans through the mapping + planning pipeline without
/// robot motion: each completed submap triggers a frontier update and a full
/// cluster/score/select evaluation from the latest scan origin.
MetricsLog runReplay(const Scenario& scenario, const std::vector<LidarScan>& scans,
                     const RunOptions& options = {});

}  // namespace mrfe
