#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mrfe/frontier_clustering.hpp"
#include "mrfe/frontier_detection.hpp"
#include "mrfe/types.hpp"

namespace mrfe {

/// Multi-beam spinning lidar model: evenly spaced elevation rings over the
/// vertical FOV, full 360 degree azimuth sweep at azimuth_step resolution.
struct SensorModel {
  double max_range = 20.0;        // meters
  double min_range = 0.9;         // meters; closer returns are dropped
  int vertical_beams = 16;
  double vertical_fov_deg = 30.0; // total span, symmetric around horizontal
  double azimuth_step_deg = 3.0;
  double rate_hz = 10.0;          // scans per simulated second
};

/// Axis-aligned world: boundary walls (when solid) plus solid boxes inside.
struct ScenarioWorld {
  Aabb bounds;
  std::vector<Aabb> obstacles;
  Eigen::Vector3d start = Eigen::Vector3d::Zero();
  double start_yaw = 0.0;
  bool solid_bounds = true;
};

struct PlannerConfig {
  double r_max = 0.25;          // finest voxel edge, meters
  int d_max = 16;
  int d_exp = 14;
  double bandwidth = 2.0;       // meters
  double lambda = 0.1386;       // 1/meters
  double gain_cube_side = 0.0;  // meters; 0 means "use sensor max range"
  int scans_per_submap = 10;    // N_s
  double safety_margin = 0.4;   // meters, clearance kept from occupied voxels
  Connectivity connectivity = Connectivity::Face6;
  ExplorationConfig::Kernel kernel = ExplorationConfig::Kernel::Flat;
  bool fix_altitude = true;     // navigate at the start altitude
  double v_max = 0.8;           // m/s
  double a_max = 0.5;           // m/s^2, speed ramp only
  double dt = 0.05;             // seconds per simulation step
  double max_sim_time = 3600.0; // simulated-seconds guard
};

struct Scenario {
  std::string name;
  ScenarioWorld world;
  SensorModel sensor;
  PlannerConfig planner;
  std::uint64_t seed = 0;
};

/// Exploration voxel edge r_exp derived from d_exp.
double explorationEdge(const PlannerConfig& p);

/// Effective gain cube side: configured value or the sensor range default.
double gainCubeSide(const PlannerConfig& p, const SensorModel& s);

/// Parses a scenario JSON file. Throws std::runtime_error with a message on
/// missing files, malformed JSON, or failed validation.
Scenario loadScenario(const std::string& path);
Scenario parseScenario(const std::string& json_text, const std::string& origin);

/// Checks structural invariants (start inside bounds and outside obstacles,
/// positive sensor/planner parameters, obstacles within bounds).
void validateScenario(const Scenario& s);

}  // namespace mrfe
