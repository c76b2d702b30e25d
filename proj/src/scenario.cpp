#include "mrfe/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mrfe {

namespace {

using nlohmann::json;

Eigen::Vector3d parseVec3(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3)
    throw std::runtime_error("scenario: " + what + " must be an array of 3 numbers");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Aabb parseBox(const json& j, const std::string& what) {
  Aabb box;
  if (j.is_array() && j.size() == 2) {
    box.min = parseVec3(j[0], what + " min");
    box.max = parseVec3(j[1], what + " max");
  } else if (j.is_object() && j.contains("min") && j.contains("max")) {
    box.min = parseVec3(j["min"], what + " min");
    box.max = parseVec3(j["max"], what + " max");
  } else {
    throw std::runtime_error("scenario: " + what + " must be [min,max] corner pair");
  }
  if (!box.valid()) throw std::runtime_error("scenario: " + what + " has non-positive extent");
  return box;
}

}  // namespace

double explorationEdge(const PlannerConfig& p) {
  return p.r_max * static_cast<double>(std::int64_t{1} << (p.d_max - p.d_exp));
}

double gainCubeSide(const PlannerConfig& p, const SensorModel& s) {
  return p.gain_cube_side > 0.0 ? p.gain_cube_side : s.max_range;
}

Scenario parseScenario(const std::string& json_text, const std::string& origin) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("scenario: " + origin + ": " + e.what());
  }

  Scenario s;
  s.name = j.value("name", origin);
  if (!j.contains("bounds")) throw std::runtime_error("scenario: missing 'bounds'");
  s.world.bounds = parseBox(j["bounds"], "bounds");
  if (j.contains("obstacles")) {
    int i = 0;
    for (const auto& ob : j["obstacles"])
      s.world.obstacles.push_back(parseBox(ob, "obstacles[" + std::to_string(i++) + "]"));
  }
  if (!j.contains("start")) throw std::runtime_error("scenario: missing 'start'");
  s.world.start = parseVec3(j["start"], "start");
  s.world.start_yaw = j.value("start_yaw", 0.0);
  s.world.solid_bounds = j.value("solid_bounds", true);

  if (j.contains("sensor")) {
    const auto& js = j["sensor"];
    s.sensor.max_range = js.value("range", s.sensor.max_range);
    s.sensor.min_range = js.value("min_range", s.sensor.min_range);
    s.sensor.vertical_beams = js.value("beams", s.sensor.vertical_beams);
    s.sensor.vertical_fov_deg = js.value("fov", s.sensor.vertical_fov_deg);
    s.sensor.azimuth_step_deg = js.value("azimuth_step", s.sensor.azimuth_step_deg);
    s.sensor.rate_hz = js.value("rate", s.sensor.rate_hz);
  }

  if (j.contains("planner")) {
    const auto& jp = j["planner"];
    s.planner.r_max = jp.value("r_max", s.planner.r_max);
    s.planner.d_exp = jp.value("d_exp", s.planner.d_exp);
    s.planner.bandwidth = jp.value("bandwidth", s.planner.bandwidth);
    s.planner.lambda = jp.value("lambda", s.planner.lambda);
    s.planner.gain_cube_side = jp.value("gain_cube_side", s.planner.gain_cube_side);
    s.planner.scans_per_submap = jp.value("N_s", s.planner.scans_per_submap);
    s.planner.safety_margin = jp.value("safety_margin", s.planner.safety_margin);
    s.planner.fix_altitude = jp.value("fix_altitude", s.planner.fix_altitude);
    s.planner.max_sim_time = jp.value("max_sim_time", s.planner.max_sim_time);
    if (jp.contains("connectivity")) {
      const int c = jp["connectivity"].get<int>();
      if (c == 6)
        s.planner.connectivity = Connectivity::Face6;
      else if (c == 26)
        s.planner.connectivity = Connectivity::Full26;
      else
        throw std::runtime_error("scenario: planner.connectivity must be 6 or 26");
    }
    if (jp.contains("kernel")) {
      const std::string k = jp["kernel"].get<std::string>();
      if (k == "flat")
        s.planner.kernel = ExplorationConfig::Kernel::Flat;
      else if (k == "gaussian")
        s.planner.kernel = ExplorationConfig::Kernel::Gaussian;
      else
        throw std::runtime_error("scenario: planner.kernel must be 'flat' or 'gaussian'");
    }
  }

  if (j.contains("robot")) {
    const auto& jr = j["robot"];
    s.planner.v_max = jr.value("v_max", s.planner.v_max);
    s.planner.a_max = jr.value("a_max", s.planner.a_max);
    s.planner.dt = jr.value("dt", s.planner.dt);
  }

  s.seed = j.value("seed", std::uint64_t{0});

  validateScenario(s);
  return s;
}

Scenario loadScenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("scenario: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parseScenario(buf.str(), path);
}

void validateScenario(const Scenario& s) {
  auto fail = [](const std::string& what) { throw std::runtime_error("scenario: " + what); };

  if (!s.world.bounds.contains(s.world.start)) fail("start position outside bounds");
  for (std::size_t i = 0; i < s.world.obstacles.size(); ++i) {
    const Aabb& ob = s.world.obstacles[i];
    if ((s.world.start.array() >= ob.min.array()).all() &&
        (s.world.start.array() <= ob.max.array()).all())
      fail("start position inside obstacle " + std::to_string(i));
    if ((ob.min.array() < s.world.bounds.min.array() - 1e-9).any() ||
        (ob.max.array() > s.world.bounds.max.array() + 1e-9).any())
      fail("obstacle " + std::to_string(i) + " extends outside bounds");
  }

  if (s.sensor.max_range <= 0.0) fail("sensor range must be positive");
  if (s.sensor.min_range < 0.0 || s.sensor.min_range >= s.sensor.max_range)
    fail("sensor min_range must be in [0, range)");
  if (s.sensor.vertical_beams < 1) fail("sensor beams must be >= 1");
  if (s.sensor.azimuth_step_deg <= 0.0) fail("sensor azimuth_step must be positive");
  if (s.sensor.rate_hz <= 0.0) fail("sensor rate must be positive");

  const PlannerConfig& p = s.planner;
  if (p.r_max <= 0.0) fail("planner r_max must be positive");
  if (p.d_max < 1 || p.d_max > 16) fail("planner d_max must be in [1,16]");
  if (p.d_exp < 1 || p.d_exp > p.d_max) fail("planner d_exp must be in [1, d_max]");
  if (p.bandwidth <= 0.0) fail("planner bandwidth must be positive");
  if (p.lambda < 0.0) fail("planner lambda must be non-negative");
  if (p.gain_cube_side < 0.0) fail("planner gain_cube_side must be non-negative");
  if (p.scans_per_submap < 1) fail("planner N_s must be >= 1");
  if (p.safety_margin < 0.0) fail("planner safety_margin must be non-negative");
  if (p.v_max <= 0.0) fail("robot v_max must be positive");
  if (p.a_max <= 0.0) fail("robot a_max must be positive");
  if (p.dt <= 0.0) fail("robot dt must be positive");
}

}  // namespace mrfe
