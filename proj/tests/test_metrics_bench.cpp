#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mrfe/bench.hpp"
#include "mrfe/exploration_loop.hpp"
#include "mrfe/frontier_detection.hpp"
#include "mrfe/metrics_io.hpp"
#include "oracles.hpp"

using namespace mrfe;

namespace {

IterationMetrics sampleIteration() {
  IterationMetrics m;
  m.iteration = 3;
  m.global_frontier = 100;
  m.local_frontier = 20;
  m.parents = 10;
  m.candidates = 4;
  m.t_octree_update = 0.001;
  m.t_frontier_detect = 0.002;
  m.t_cluster = 0.003;
  m.t_select = 0.004;
  m.t_total = 0.010;
  m.target = Eigen::Vector3d(1.5, -2.25, 3.0);
  m.target_gain = 0.42;
  m.scored.push_back(makeScoredCandidate(m.target, 0.9, 2.0, 0.1));
  m.scored.push_back(makeScoredCandidate({0, 0, 0}, 0.1, 1.0, 0.1));
  m.chosen_index = 0;
  return m;
}

std::size_t columnCount(const std::string& line) {
  return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

}  // namespace

TEST(MetricsIo, RowsMatchHeaderColumnCounts) {
  const IterationMetrics m = sampleIteration();
  EXPECT_EQ(columnCount(iterationCsvRow(m)), columnCount(kIterationCsvHeader));

  VolumeSample v{1.0, 0.25, 0.25, 0.5};
  EXPECT_EQ(columnCount(volumeCsvRow(v)), columnCount(kVolumeCsvHeader));

  const auto rows = candidateCsvRows(m);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& row : rows) EXPECT_EQ(columnCount(row), columnCount(kCandidateCsvHeader));
  EXPECT_NE(rows[0].find(",1"), std::string::npos);  // chosen flag on first row
}

TEST(MetricsIo, VolumeRowFractionsSumWithinTolerance) {
  VolumeSample v{12.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  const std::string row = volumeCsvRow(v);
  std::stringstream ss(row);
  std::string cell;
  std::vector<double> vals;
  while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
  ASSERT_EQ(vals.size(), 4u);
  EXPECT_NEAR(vals[1] + vals[2] + vals[3], 1.0, 1e-9);
}

TEST(MetricsIo, ColumnStatsRecomputeFromFile) {
  const auto path =
      (std::filesystem::temp_directory_path() / "mrfe_stats_test.csv").string();
  {
    std::ofstream out(path);
    out << "iter,t_total\n1,0.5\n2,1.0\n3,1.5\n";
  }
  const auto csv = readCsv(path);
  const ColumnStats stats = columnStats(csv, "t_total");
  EXPECT_EQ(stats.count, 3u);
  EXPECT_DOUBLE_EQ(stats.mean, 1.0);
  EXPECT_DOUBLE_EQ(stats.stdev, 0.5);
  EXPECT_THROW(columnStats(csv, "missing"), std::runtime_error);
  std::remove(path.c_str());
}

TEST(MetricsIo, SummaryJsonCarriesHeadlineStatistics) {
  MetricsLog log;
  log.summary.termination_reason = "frontier_empty";
  log.summary.mean_planner_time = 0.197;
  log.summary.stdev_planner_time = 0.062;
  const std::string json = summaryJson(log, "house");
  EXPECT_NE(json.find("\"termination_reason\": \"frontier_empty\""), std::string::npos);
  EXPECT_NE(json.find("mean_planner_time_s"), std::string::npos);
  EXPECT_NE(json.find("0.197"), std::string::npos);
}

TEST(MetricsIo, SummaryRecomputableFromCsvWithinTolerance) {
  // Stream a real run through the CSV writer, then re-derive the headline
  // statistics from the parsed file.
  Scenario s;
  s.world.bounds.min = Eigen::Vector3d::Zero();
  s.world.bounds.max = Eigen::Vector3d(8, 8, 4);
  s.world.start = Eigen::Vector3d(4, 4, 2);
  s.sensor.max_range = 15.0;
  s.sensor.vertical_beams = 9;
  s.sensor.vertical_fov_deg = 120.0;
  s.sensor.azimuth_step_deg = 6.0;
  s.planner.r_max = 0.5;
  s.planner.scans_per_submap = 5;
  s.planner.safety_margin = 0.5;
  s.planner.max_sim_time = 120.0;

  const auto path =
      (std::filesystem::temp_directory_path() / "mrfe_summary_roundtrip.csv").string();
  std::ofstream out(path);
  out << kIterationCsvHeader << "\n";
  RunOptions options;
  options.on_iteration = [&](const IterationMetrics& m) { out << iterationCsvRow(m) << "\n"; };
  const MetricsLog log = runExploration(s, options);
  out.close();

  const auto csv = readCsv(path);
  ASSERT_GE(csv.size(), 2u);
  const ColumnStats stats = columnStats(csv, "t_total");
  EXPECT_EQ(static_cast<int>(stats.count), log.summary.iterations);
  EXPECT_NEAR(stats.mean, log.summary.mean_planner_time, 1e-9);
  EXPECT_NEAR(stats.stdev, log.summary.stdev_planner_time, 1e-9);
  std::remove(path.c_str());
}

TEST(Bench, SyntheticFrontierIsDeterministicPerSeed) {
  const SyntheticFrontier a = generateSyntheticFrontier(2000, 5);
  const SyntheticFrontier b = generateSyntheticFrontier(2000, 5);
  EXPECT_EQ(a.changed, b.changed);
  const SyntheticFrontier c = generateSyntheticFrontier(2000, 6);
  EXPECT_NE(a.changed, c.changed);
}

TEST(Bench, SyntheticFrontierSizeTracksRequest) {
  for (const std::size_t target : {std::size_t{1000}, std::size_t{5000}}) {
    SyntheticFrontier sf = generateSyntheticFrontier(target, 2);
    FrontierSet fs;
    updateGlobalFrontier(fs, updateLocalFrontier(sf.octree, sf.changed), sf.octree);
    EXPECT_GE(fs.global.size(), target / 2);
    EXPECT_LE(fs.global.size(), target * 2);
    // Every shell voxel borders unknown, so all assigned voxels are frontier.
    EXPECT_EQ(fs.global.size(), sf.changed.size());
  }
}

TEST(Bench, LinearFitBehaves) {
  const LinearFit exact = fitLinear({1, 2, 3, 4}, {2, 4, 6, 8});
  EXPECT_NEAR(exact.slope, 2.0, 1e-12);
  EXPECT_NEAR(exact.intercept, 0.0, 1e-12);
  EXPECT_NEAR(exact.r_squared, 1.0, 1e-12);

  const LinearFit noisy = fitLinear({1, 2, 3, 4}, {2.1, 3.7, 6.4, 7.9});
  EXPECT_GE(noisy.r_squared, 0.0);
  EXPECT_LE(noisy.r_squared, 1.0);
}

TEST(Bench, ReportStructureAndMonotoneFrontiers) {
  const BenchReport report = runBench({500, 4000}, 11);
  ASSERT_EQ(report.cases.size(), 2u);
  EXPECT_LT(report.cases[0].frontier, report.cases[1].frontier);
  for (const auto& c : report.cases) {
    EXPECT_GT(c.frontier, 0u);
    EXPECT_GE(c.parents, c.candidates);
    EXPECT_GE(c.frontier, c.parents);
    EXPECT_GE(c.t_total, c.t_detect);
  }
  EXPECT_GE(report.fit.r_squared, 0.0);
  EXPECT_LE(report.fit.r_squared, 1.0);
}
