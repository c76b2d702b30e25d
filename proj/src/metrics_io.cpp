#include "mrfe/metrics_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mrfe {

const char* const kIterationCsvHeader =
    "iter,Fg,Fl,Fexp,Fc,t_octo,t_detect,t_cluster,t_select,t_total,gx,gy,gz,G";
const char* const kVolumeCsvHeader = "t,free,occ,unknown";
const char* const kCandidateCsvHeader = "iter,x,y,z,I,L,G,chosen";

std::string iterationCsvRow(const IterationMetrics& m) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "%d,%zu,%zu,%zu,%zu,%.9f,%.9f,%.9f,%.9f,%.9f,%.6f,%.6f,%.6f,%.12g",
                m.iteration, m.global_frontier, m.local_frontier, m.parents, m.candidates,
                m.t_octree_update, m.t_frontier_detect, m.t_cluster, m.t_select, m.t_total,
                m.target.x(), m.target.y(), m.target.z(), m.target_gain);
  return buf;
}

std::string volumeCsvRow(const VolumeSample& v) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%.6f,%.12f,%.12f,%.12f", v.sim_time, v.free_frac,
                v.occupied_frac, v.unknown_frac);
  return buf;
}

std::vector<std::string> candidateCsvRows(const IterationMetrics& m) {
  std::vector<std::string> rows;
  rows.reserve(m.scored.size());
  char buf[384];
  for (std::size_t i = 0; i < m.scored.size(); ++i) {
    const ScoredCandidate& c = m.scored[i];
    std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f,%.6f,%.12f,%.6f,%.12g,%d", m.iteration,
                  c.position.x(), c.position.y(), c.position.z(), c.info_gain, c.distance,
                  c.total_gain, static_cast<int>(i) == m.chosen_index ? 1 : 0);
    rows.emplace_back(buf);
  }
  return rows;
}

std::string summaryJson(const MetricsLog& log, const std::string& scenario_name) {
  nlohmann::ordered_json j;
  j["scenario"] = scenario_name;
  j["termination_reason"] = log.summary.termination_reason;
  j["sim_time_s"] = log.summary.sim_time;
  j["wall_time_s"] = log.summary.wall_time;
  j["iterations"] = log.summary.iterations;
  j["collisions"] = log.summary.collision_count;
  j["free_frac"] = log.summary.free_frac;
  j["occupied_frac"] = log.summary.occupied_frac;
  j["unknown_frac"] = log.summary.unknown_frac;
  j["mean_planner_time_s"] = log.summary.mean_planner_time;
  j["stdev_planner_time_s"] = log.summary.stdev_planner_time;
  return j.dump(2);
}

std::vector<std::vector<std::string>> readCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("readCsv: cannot open '" + path + "'");
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

ColumnStats columnStats(const std::vector<std::vector<std::string>>& csv,
                        const std::string& column) {
  if (csv.empty()) throw std::runtime_error("columnStats: empty csv");
  std::size_t col = csv[0].size();
  for (std::size_t i = 0; i < csv[0].size(); ++i)
    if (csv[0][i] == column) col = i;
  if (col == csv[0].size()) throw std::runtime_error("columnStats: no column '" + column + "'");

  ColumnStats stats;
  std::vector<double> values;
  for (std::size_t r = 1; r < csv.size(); ++r) values.push_back(std::stod(csv[r][col]));
  stats.count = values.size();
  if (values.empty()) return stats;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  stats.mean = mean;
  stats.stdev = values.size() > 1 ? std::sqrt(var / static_cast<double>(values.size() - 1)) : 0.0;
  return stats;
}

}  // namespace mrfe
