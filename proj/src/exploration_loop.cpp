#include "mrfe/exploration_loop.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mrfe/lidar_sim.hpp"
#include "mrfe/logging.hpp"
#include "mrfe/path_planner.hpp"
#include "mrfe/stopwatch.hpp"

namespace mrfe {

namespace {

struct LoopState {
  OccupancyOctree octree;
  SubmapAccumulator accumulator;
  FrontierSet frontiers;
  ExplorationConfig cluster_cfg;
  GainParams gains;

  Eigen::Vector3d robot;
  double flight_z = 0.0;

  // Active polyline; the robot is idle when next_waypoint == path.size().
  std::vector<Eigen::Vector3d> path;
  std::size_t next_waypoint = 0;
  double speed = 0.0;

  int submaps_since_selection = 0;
  std::size_t last_local_size = 0;
  double t_octree_acc = 0.0;
  double t_detect_acc = 0.0;

  // Fine voxels of targets already reached without the map changing since;
  // cleared by any map change. Prevents sterile hover/ping-pong cycles when
  // residual unknown space cannot be observed from the candidates.
  VoxelKeySet exhausted_targets;

  MetricsLog log;
};

void sampleVolume(LoopState& s, double sim_time, const RunOptions& options) {
  const VolumeFractions f = s.octree.volumeFractions();
  VolumeSample v{sim_time, f.free_frac, f.occupied_frac, f.unknown_frac};
  s.log.volumes.push_back(v);
  if (options.on_volume) options.on_volume(v);
}

void integrateSubmap(LoopState& s, const SubmapCloud& cloud, Connectivity conn) {
  Stopwatch sw;
  const ChangeSet changes = s.octree.integrateCloud(cloud.points, cloud.mean_origin);
  s.t_octree_acc += sw.elapsed();

  sw.restart();
  const VoxelKeySet local = updateLocalFrontier(s.octree, changes, conn);
  updateGlobalFrontier(s.frontiers, local, s.octree, conn);
  s.t_detect_acc += sw.elapsed();

  s.last_local_size = local.size();
  ++s.submaps_since_selection;
  if (!changes.empty()) s.exhausted_targets.clear();
}

/// One waypoint-arrival planning cycle. Returns the termination reason, or
/// an empty string when a new path was committed.
std::string runSelection(LoopState& s, const PlannerConfig& planner, const RunOptions& options) {
  const int iteration = static_cast<int>(s.log.iterations.size()) + 1;

  Stopwatch sw;
  const CandidateSet cs = clusterFrontier(s.octree, s.frontiers.global, s.cluster_cfg);
  const double t_cluster = sw.elapsed();

  sw.restart();
  const std::vector<ScoredCandidate> scored =
      scoreCandidates(s.octree, s.robot, cs.candidates, s.gains);
  const std::vector<std::size_t> order = rankCandidates(scored);
  const std::optional<ScoredCandidate> best = selectBest(scored);
  const double t_select = sw.elapsed();

  if (options.on_waypoint) options.on_waypoint(iteration, s.octree, s.frontiers);

  if (!best) return cs.candidates.empty() ? "frontier_empty" : "no_positive_gain";

  const double r_exp = s.octree.edgeLength(s.cluster_cfg.d_exp);

  // A late submap can mark the robot's own voxel occupied: wall surfaces
  // land in the free-air voxel next to the wall, and the robot may have
  // moved into it meanwhile. Recover with a short hop to the nearest free
  // voxel reachable through free space, then plan from there.
  Eigen::Vector3d plan_start = s.robot;
  bool escape_hop = false;
  if (s.octree.stateAt(s.octree.keyAtPoint(s.robot)) == VoxelState::Occupied) {
    const TraversabilityMap free_map(s.octree, 0.0);  // plain free-state test
    const double r = s.octree.resolution();
    const VoxelKey at = s.octree.keyAtPoint(s.robot);
    std::vector<std::pair<double, VoxelKey>> candidates_by_distance;
    for (int dz = -3; dz <= 3; ++dz)
      for (int dy = -3; dy <= 3; ++dy)
        for (int dx = -3; dx <= 3; ++dx) {
          const VoxelKey k{at.ix + dx, at.iy + dy, at.iz + dz, at.depth};
          if (!free_map.traversable(k)) continue;
          candidates_by_distance.emplace_back(
              (s.octree.voxelCenter(k) - s.robot).norm(), k);
        }
    std::sort(candidates_by_distance.begin(), candidates_by_distance.end(),
              [](const auto& a, const auto& b) {
                return a.first != b.first ? a.first < b.first : a.second < b.second;
              });
    bool escaped = false;
    for (const auto& [dist, k] : candidates_by_distance) {
      if (dist > 3.0 * r * std::sqrt(3.0)) break;
      const Eigen::Vector3d center = s.octree.voxelCenter(k);
      if (!lineOfSight(s.octree, free_map, s.robot, center)) continue;
      plan_start = center;
      escaped = true;
      break;
    }
    if (!escaped) return "stalled";
    escape_hop = true;
  }

  int chosen = -1;
  bool all_exhausted = true;
  for (const std::size_t idx : order) {
    if (scored[idx].info_gain <= 0.0) break;  // zero-gain candidates rank last

    Eigen::Vector3d goal = scored[idx].position;
    if (planner.fix_altitude) goal.z() = s.flight_z;
    const VoxelKey goal_key = s.octree.keyAtPoint(goal);
    if (s.exhausted_targets.contains(goal_key)) continue;
    all_exhausted = false;

    auto path = planPath(s.octree, plan_start, goal, planner.safety_margin, 2.0 * r_exp);
    if (!path) continue;  // unreachable, try the next-best candidate

    s.path = std::move(*path);
    if (escape_hop) s.path.insert(s.path.begin(), s.robot);
    s.next_waypoint = 1;  // path[0] is the current position
    s.speed = 0.0;
    chosen = static_cast<int>(idx);
    s.exhausted_targets.insert(goal_key);
    break;
  }
  if (chosen < 0) return all_exhausted ? "stalled" : "all_unreachable";

  IterationMetrics m;
  m.iteration = iteration;
  m.global_frontier = s.frontiers.global.size();
  m.local_frontier = s.last_local_size;
  m.parents = cs.parents.size();
  m.candidates = cs.candidates.size();
  m.t_octree_update = s.t_octree_acc;
  m.t_frontier_detect = s.t_detect_acc;
  m.t_cluster = t_cluster;
  m.t_select = t_select;
  m.t_total = m.t_octree_update + m.t_frontier_detect + m.t_cluster + m.t_select;
  m.target = scored[chosen].position;
  m.target_gain = scored[chosen].total_gain;
  m.scored = scored;
  m.chosen_index = chosen;

  s.log.iterations.push_back(m);
  s.log.chosen_targets.push_back(m.target);
  if (options.on_iteration) options.on_iteration(s.log.iterations.back());

  s.t_octree_acc = 0.0;
  s.t_detect_acc = 0.0;
  s.submaps_since_selection = 0;
  return "";
}

/// Moves the robot along the active path by one time step; speed ramps at
/// a_max up to v_max, turns are instantaneous.
void advanceRobot(LoopState& s, const PlannerConfig& planner) {
  if (s.next_waypoint >= s.path.size()) return;
  s.speed = std::min(planner.v_max, s.speed + planner.a_max * planner.dt);
  double remaining = s.speed * planner.dt;
  while (remaining > 0.0 && s.next_waypoint < s.path.size()) {
    const Eigen::Vector3d& target = s.path[s.next_waypoint];
    const Eigen::Vector3d delta = target - s.robot;
    const double dist = delta.norm();
    if (dist <= remaining) {
      s.robot = target;
      remaining -= dist;
      ++s.next_waypoint;
    } else {
      s.robot += delta * (remaining / dist);
      remaining = 0.0;
    }
  }
  if (s.next_waypoint >= s.path.size()) s.speed = 0.0;
}

bool collides(const ScenarioWorld& world, const Eigen::Vector3d& p) {
  if (!world.bounds.contains(p)) return true;
  for (const auto& ob : world.obstacles)
    if (ob.strictlyInside(p)) return true;
  return false;
}

void finishSummary(MetricsLog& log, const OccupancyOctree& octree, const std::string& reason,
                   double sim_time, std::size_t collisions, double wall_time) {
  RunSummary& sum = log.summary;
  sum.termination_reason = reason;
  sum.sim_time = sim_time;
  sum.iterations = static_cast<int>(log.iterations.size());
  sum.collision_count = collisions;
  const VolumeFractions f = octree.volumeFractions();
  sum.free_frac = f.free_frac;
  sum.occupied_frac = f.occupied_frac;
  sum.unknown_frac = f.unknown_frac;
  sum.wall_time = wall_time;

  const std::size_t n = log.iterations.size();
  if (n > 0) {
    double mean = 0.0;
    for (const auto& it : log.iterations) mean += it.t_total;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (const auto& it : log.iterations) var += (it.t_total - mean) * (it.t_total - mean);
    sum.mean_planner_time = mean;
    sum.stdev_planner_time = n > 1 ? std::sqrt(var / static_cast<double>(n - 1)) : 0.0;
  }
}

LoopState makeState(const Scenario& scenario) {
  const PlannerConfig& p = scenario.planner;
  OccupancyOctree octree(p.r_max, scenario.world.bounds, p.d_max);
  ExplorationConfig cfg = makeExplorationConfig(octree, p.d_exp, p.bandwidth);
  cfg.kernel = p.kernel;
  return LoopState{
      .octree = std::move(octree),
      .accumulator = SubmapAccumulator(p.scans_per_submap, p.r_max, scenario.world.bounds.min),
      .frontiers = {},
      .cluster_cfg = cfg,
      .gains = GainParams{p.lambda, gainCubeSide(p, scenario.sensor)},
      .robot = scenario.world.start,
      .flight_z = scenario.world.start.z(),
      .path = {},
      .next_waypoint = 0,
      .speed = 0.0,
      .submaps_since_selection = 0,
      .last_local_size = 0,
      .t_octree_acc = 0.0,
      .t_detect_acc = 0.0,
      .exhausted_targets = {},
      .log = {},
  };
}

}  // namespace

MetricsLog runExploration(const Scenario& scenario, const RunOptions& options) {
  validateScenario(scenario);
  const PlannerConfig& planner = scenario.planner;
  const Connectivity conn = planner.connectivity;

  Stopwatch wall;
  LoopState s = makeState(scenario);

  const double dt = planner.dt;
  const auto scan_every =
      std::max<std::int64_t>(1, std::llround((1.0 / scenario.sensor.rate_hz) / dt));
  const auto vol_every =
      std::max<std::int64_t>(1, std::llround(options.volume_sample_period / dt));
  const auto max_steps = static_cast<std::int64_t>(std::ceil(planner.max_sim_time / dt));

  std::string reason;
  std::size_t collisions = 0;
  int scan_index = 0;
  double sim_time = 0.0;
  double yaw = scenario.world.start_yaw;

  for (std::int64_t step = 0;; ++step) {
    sim_time = static_cast<double>(step) * dt;

    if (options.wall_clock_cap_s > 0.0 && wall.elapsed() > options.wall_clock_cap_s) {
      reason = "wall_clock_cap";
      break;
    }
    if (step > max_steps) {
      reason = "sim_time_cap";
      break;
    }

    if (step % scan_every == 0) {
      const LidarScan scan =
          simulateScan(scenario.world, s.robot, yaw, scenario.sensor, scan_index++);
      if (options.on_scan) options.on_scan(scan);
      if (auto cloud = s.accumulator.accumulateScan(scan)) integrateSubmap(s, *cloud, conn);
    }
    if (step % vol_every == 0) sampleVolume(s, sim_time, options);

    const bool idle = s.next_waypoint >= s.path.size();
    if (idle && s.submaps_since_selection >= 1) {
      reason = runSelection(s, planner, options);
      if (!reason.empty()) break;
    }

    advanceRobot(s, planner);
    if (collides(scenario.world, s.robot)) {
      ++collisions;
      if (logging::enabled(logging::Level::Debug)) {
        std::ostringstream os;
        os << "collision at t=" << sim_time << " pos=" << s.robot.x() << "," << s.robot.y()
           << "," << s.robot.z();
        logging::debug(os.str());
      }
    }
  }

  sampleVolume(s, sim_time, options);
  finishSummary(s.log, s.octree, reason, sim_time, collisions, wall.elapsed());
  logging::debug("run finished: " + reason + " after " +
                 std::to_string(s.log.iterations.size()) + " iterations");
  return s.log;
}

MetricsLog runReplay(const Scenario& scenario, const std::vector<LidarScan>& scans,
                     const RunOptions& options) {
  const PlannerConfig& planner = scenario.planner;
  const Connectivity conn = planner.connectivity;

  Stopwatch wall;
  LoopState s = makeState(scenario);
  const double submap_period =
      static_cast<double>(planner.scans_per_submap) / scenario.sensor.rate_hz;

  sampleVolume(s, 0.0, options);
  for (const auto& scan : scans) {
    auto cloud = s.accumulator.accumulateScan(scan);
    if (!cloud) continue;
    integrateSubmap(s, *cloud, conn);

    // Evaluate the full planner from the latest sensor origin, replay has
    // no motion of its own.
    const int iteration = static_cast<int>(s.log.iterations.size()) + 1;
    Stopwatch sw;
    const CandidateSet cs = clusterFrontier(s.octree, s.frontiers.global, s.cluster_cfg);
    const double t_cluster = sw.elapsed();
    sw.restart();
    Eigen::Vector3d origin = scan.origin;
    if (!s.octree.contains(origin)) origin = s.octree.bounds().center();
    const std::vector<ScoredCandidate> scored =
        scoreCandidates(s.octree, origin, cs.candidates, s.gains);
    const std::vector<std::size_t> order = rankCandidates(scored);
    const std::optional<ScoredCandidate> best = selectBest(scored);
    const double t_select = sw.elapsed();

    IterationMetrics m;
    m.iteration = iteration;
    m.global_frontier = s.frontiers.global.size();
    m.local_frontier = s.last_local_size;
    m.parents = cs.parents.size();
    m.candidates = cs.candidates.size();
    m.t_octree_update = s.t_octree_acc;
    m.t_frontier_detect = s.t_detect_acc;
    m.t_cluster = t_cluster;
    m.t_select = t_select;
    m.t_total = m.t_octree_update + m.t_frontier_detect + m.t_cluster + m.t_select;
    if (best) {
      m.target = best->position;
      m.target_gain = best->total_gain;
      m.chosen_index = static_cast<int>(order.front());
    }
    m.scored = scored;
    if (best) s.log.chosen_targets.push_back(best->position);
    s.log.iterations.push_back(m);
    if (options.on_iteration) options.on_iteration(s.log.iterations.back());
    if (options.on_waypoint) options.on_waypoint(iteration, s.octree, s.frontiers);

    s.t_octree_acc = 0.0;
    s.t_detect_acc = 0.0;
    sampleVolume(s, submap_period * s.accumulator.completedSubmaps(), options);
  }

  finishSummary(s.log, s.octree, "replay_end",
                submap_period * s.accumulator.completedSubmaps(), 0, wall.elapsed());
  return s.log;
}

}  // namespace mrfe
