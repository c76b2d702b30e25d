// Acceptance suite: runs every release criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exits non-zero if any fail.
//
// Usage: acceptance_tests [path-to-mrfe-cli] [scenario-dir]

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mrfe/bench.hpp"
#include "mrfe/exploration_loop.hpp"
#include "mrfe/frontier_clustering.hpp"
#include "mrfe/frontier_detection.hpp"
#include "mrfe/metrics_io.hpp"
#include "mrfe/occupancy_octree.hpp"
#include "mrfe/scenario.hpp"
#include "mrfe/stopwatch.hpp"
#include "mrfe/target_selection.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace mrfe;

namespace {

std::string g_cli_path;
std::string g_scenario_dir;
std::vector<std::string> g_notes;

void note(const std::string& s) { g_notes.push_back(s); }

Aabb box(double x0, double y0, double z0, double x1, double y1, double z1) {
  Aabb b;
  b.min = Eigen::Vector3d(x0, y0, z0);
  b.max = Eigen::Vector3d(x1, y1, z1);
  return b;
}

// --- criterion 1: lambda worked example --------------------------------------

bool criterionLambdaWorkedExample() {
  const double lambda = lambdaFromPreference(1.0, 2.0, 0.0, 5.0);
  if (std::abs(lambda - 0.1386) > 1e-4) return false;

  // Plugging the worked-example lambda back in equalizes the total gains.
  if (std::abs(totalGain(1.0, 0.0, lambda) - totalGain(2.0, 5.0, lambda)) > 1e-12)
    return false;

  std::mt19937 rng(2);
  std::uniform_real_distribution<double> gain(0.05, 1.0);
  std::uniform_real_distribution<double> dist(0.0, 40.0);
  for (int i = 0; i < 1000; ++i) {
    const double i1 = gain(rng), i2 = gain(rng);
    double l1 = dist(rng), l2 = dist(rng);
    if (l1 == l2) l2 += 0.5;
    const double l = lambdaFromPreference(i1, i2, l1, l2);
    const double g1 = totalGain(i1, l1, l), g2 = totalGain(i2, l2, l);
    if (std::abs(g1 - g2) > 1e-12 * std::max(1.0, std::max(g1, g2))) return false;
  }
  note("lambda(2x, 5m) = " + std::to_string(lambda));
  return true;
}

// --- criterion 2: frontier oracle equivalence --------------------------------

bool criterionFrontierOracle() {
  Stopwatch sw;
  std::mt19937 rng(1234);
  std::uniform_int_distribution<int> side_vox(6, 32);
  std::uniform_int_distribution<int> n_updates(2, 6);
  std::uniform_int_distribution<int> n_points(1, 40);

  int sequences = 0;
  for (int seq = 0; seq < 200; ++seq) {
    const double res = 0.5;
    const int n = side_vox(rng);
    OccupancyOctree tree(res, box(0, 0, 0, n * res, n * res, n * res));
    FrontierSet fsr;
    const int updates = n_updates(rng);
    for (int u = 0; u < updates; ++u) {
      std::vector<Eigen::Vector3d> cloud;
      const int pts = n_points(rng);
      for (int i = 0; i < pts; ++i) cloud.push_back(test::randomPointIn(tree.bounds(), rng));
      const ChangeSet changes =
          tree.integrateCloud(cloud, test::randomPointIn(tree.bounds(), rng));
      updateGlobalFrontier(fsr, updateLocalFrontier(tree, changes), tree);
      if (fsr.global != test::naiveFrontierScan(tree)) return false;
    }
    ++sequences;
  }
  const double elapsed = sw.elapsed();
  note("sequences=" + std::to_string(sequences) +
       ", elapsed=" + std::to_string(elapsed) + "s");
  return sequences == 200 && elapsed < 60.0;
}

// --- criterion 3: parent-clustering oracle -----------------------------------

bool criterionParentClusteringOracle() {
  OccupancyOctree tree(0.25, box(0, 0, 0, 16, 16, 16));  // 64^3 addressable
  std::mt19937 rng(77);
  std::uniform_int_distribution<int> coord(0, 63);
  std::uniform_int_distribution<int> count(1, 400);
  const int d_max = tree.maxDepth();

  for (int round = 0; round < 100; ++round) {
    VoxelKeySet frontier;
    const int n = count(rng);
    for (int i = 0; i < n; ++i)
      frontier.insert(VoxelKey{coord(rng), coord(rng), coord(rng), d_max});
    for (int d_exp : {d_max, d_max - 1, d_max - 2}) {
      VoxelKeySet oracle;
      for (const auto& k : frontier) oracle.insert(test::containmentParent(tree, k, d_exp));
      const auto parents = clusterToDepth(frontier, d_exp);
      if (VoxelKeySet(parents.begin(), parents.end()) != oracle) return false;
    }
  }
  return true;
}

// --- criterion 4: mean-shift recovery ----------------------------------------

bool criterionMeanShiftRecovery() {
  const double h = 2.0;
  const std::vector<Eigen::Vector3d> means = {{0, 0, 0}, {12, 0, 0}, {0, 12, 0}};
  ExplorationConfig cfg;
  cfg.bandwidth = h;
  cfg.convergence_tol = 1e-3;

  for (unsigned seed = 0; seed < 20; ++seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> noise(0.0, h / 4.0);
    std::vector<Eigen::Vector3d> pts;
    for (const auto& mu : means)
      for (int i = 0; i < 50; ++i)
        pts.push_back(mu + Eigen::Vector3d(noise(rng), noise(rng), noise(rng)));

    const MeanShiftResult r = meanShift(pts, cfg);
    if (r.modes.size() != means.size()) return false;
    for (const auto& mu : means) {
      double best = 1e18;
      for (const auto& m : r.modes) best = std::min(best, (m - mu).norm());
      if (best >= h / 2.0) return false;
    }
  }
  return true;
}

// --- criteria 5+6: desk-scale run --------------------------------------------

bool checkVolumeInvariants(const MetricsLog& log) {
  double prev = -1.0;
  for (const auto& v : log.volumes) {
    if (std::abs(v.free_frac + v.occupied_frac + v.unknown_frac - 1.0) > 1e-9) return false;
    const double explored = v.free_frac + v.occupied_frac;
    if (explored < prev - 1e-12) return false;
    prev = explored;
  }
  return true;
}

struct DeskRunResult {
  bool volumes_ok = false;
  bool run_ok = false;
};

DeskRunResult criterionDeskScaleRun() {
  DeskRunResult result;
  Scenario s = loadScenario((fs::path(g_scenario_dir) / "desk.json").string());

  Stopwatch sw;
  const MetricsLog log = runExploration(s);
  const double wall = sw.elapsed();

  result.volumes_ok = checkVolumeInvariants(log);

  // Unknown fraction of ground-truth-reachable space.
  std::vector<std::uint8_t> reachable;
  const std::size_t reachable_count =
      test::reachableVoxelCount(s.world, s.planner.r_max, &reachable);

  OccupancyOctree probe(s.planner.r_max, s.world.bounds, s.planner.d_max);
  const Eigen::Vector3i dims = probe.fineDims();
  // Re-run is wasteful; instead reconstruct the final unknown set from the
  // run's own volume log plus a fresh deterministic rerun of the map.
  // Simpler and exact: rerun the identical scenario (deterministic) while
  // keeping the final octree via the waypoint callback.
  const OccupancyOctree* final_map = nullptr;
  OccupancyOctree rerun_map(s.planner.r_max, s.world.bounds, s.planner.d_max);
  RunOptions opts;
  opts.on_waypoint = [&](int, const OccupancyOctree& oct, const FrontierSet&) {
    // Snapshot by value each waypoint; the last one is the final planner map.
    std::stringstream ss;
    oct.exportSnapshot(ss);
    rerun_map = OccupancyOctree::importSnapshot(ss);
    final_map = &rerun_map;
  };
  const MetricsLog rerun = runExploration(s, opts);
  (void)rerun;

  std::size_t unknown_reachable = 0;
  if (final_map != nullptr) {
    for (std::int32_t z = 0; z < dims.z(); ++z)
      for (std::int32_t y = 0; y < dims.y(); ++y)
        for (std::int32_t x = 0; x < dims.x(); ++x) {
          const std::size_t lin =
              (static_cast<std::size_t>(z) * dims.y() + y) * dims.x() + x;
          if (!reachable[lin]) continue;
          if (final_map->stateAt(VoxelKey{x, y, z, final_map->maxDepth()}) ==
              VoxelState::Unknown)
            ++unknown_reachable;
        }
  }
  const double unknown_frac_reachable =
      static_cast<double>(unknown_reachable) / static_cast<double>(reachable_count);

  note("desk: reason=" + log.summary.termination_reason +
       ", unknown(reachable)=" + std::to_string(unknown_frac_reachable) +
       ", collisions=" + std::to_string(log.summary.collision_count) +
       ", wall=" + std::to_string(wall) + "s");

  result.run_ok = final_map != nullptr && unknown_frac_reachable < 0.05 &&
                  log.summary.collision_count == 0 && wall < 300.0 &&
                  (log.summary.termination_reason == "frontier_empty" ||
                   log.summary.termination_reason == "no_positive_gain" ||
                   log.summary.termination_reason == "stalled");
  return result;
}

// --- criterion 7: scalability ------------------------------------------------

bool criterionScalability() {
  const BenchReport report = runBench({1000, 10000, 100000}, 1);
  if (report.cases.size() != 3) return false;
  for (std::size_t i = 1; i < report.cases.size(); ++i)
    if (report.cases[i].t_total <= report.cases[i - 1].t_total) return false;

  const BenchCase& top = report.cases.back();
  note("bench: R^2=" + std::to_string(report.fit.r_squared) +
       ", t(1e5)=" + std::to_string(top.t_total) + "s");
  return report.fit.r_squared >= 0.9 && top.t_total < 0.5;
}

// --- criterion 8: selection properties ---------------------------------------

bool criterionSelectionProperties() {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> gain(0.01, 1.0);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  std::uniform_real_distribution<double> gap(0.1, 2.0);

  for (int round = 0; round < 1000; ++round) {
    std::vector<ScoredCandidate> cs;
    double d = 1.0;
    for (int i = 0; i < 25; ++i) {
      d += gap(rng);
      cs.push_back(makeScoredCandidate(Eigen::Vector3d(d, 0, 0), gain(rng), d, 0.1386));
    }
    const auto before = selectBest(cs);
    const double c = scale(rng);
    std::vector<ScoredCandidate> scaled;
    for (const auto& s : cs)
      scaled.push_back(makeScoredCandidate(s.position, c * s.info_gain, s.distance, 0.1386));
    const auto after = selectBest(scaled);
    if (!before || !after || before->position != after->position) return false;

    // lambda = 0 picks a maximal-gain candidate.
    std::vector<ScoredCandidate> flat;
    for (const auto& s : cs)
      flat.push_back(makeScoredCandidate(s.position, s.info_gain, s.distance, 0.0));
    const auto max_i = selectBest(flat);
    double best_gain = 0.0;
    for (const auto& s : cs) best_gain = std::max(best_gain, s.info_gain);
    if (!max_i || max_i->info_gain != best_gain) return false;

    // lambda = 1e3 picks the nearest positive-gain candidate.
    std::vector<ScoredCandidate> steep;
    for (const auto& s : cs)
      steep.push_back(makeScoredCandidate(s.position, s.info_gain, s.distance, 1e3));
    const auto nearest = selectBest(steep);
    double min_d = 1e18;
    for (const auto& s : cs)
      if (s.info_gain > 0.0) min_d = std::min(min_d, s.distance);
    if (!nearest || nearest->distance != min_d) return false;
  }
  return true;
}

// --- criterion 9: CLI determinism --------------------------------------------

std::string stripTimingColumns(const std::string& metrics_path) {
  // Drops columns 6..10 (t_octo..t_total) from every row.
  const auto csv = readCsv(metrics_path);
  std::ostringstream out;
  for (const auto& row : csv) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i >= 5 && i <= 9) continue;
      out << row[i] << ',';
    }
    out << '\n';
  }
  return out.str();
}

bool criterionCliDeterminism() {
  if (g_cli_path.empty()) {
    note("no CLI path provided");
    return false;
  }
  const fs::path out1 = fs::temp_directory_path() / "mrfe_accept_run1";
  const fs::path out2 = fs::temp_directory_path() / "mrfe_accept_run2";
  fs::remove_all(out1);
  fs::remove_all(out2);

  const std::string scenario = (fs::path(g_scenario_dir) / "house.json").string();
  for (const auto& out : {out1, out2}) {
    const std::string cmd = "'" + g_cli_path + "' run '" + scenario + "' --seed 7 --out-dir '" +
                            out.string() + "' > '" + (out.string() + ".log") + "' 2>&1";
    if (std::system(cmd.c_str()) != 0) {
      note("CLI run failed, see " + out.string() + ".log");
      return false;
    }
  }

  const std::string a = stripTimingColumns((out1 / "metrics.csv").string());
  const std::string b = stripTimingColumns((out2 / "metrics.csv").string());
  if (a != b || a.empty()) {
    note("metrics.csv differ after timing-column strip");
    return false;
  }

  // Chosen-target sequence lives in the gx,gy,gz columns, already compared
  // above; volumes and candidates must be byte-identical outright.
  std::ifstream va((out1 / "volumes.csv")), vb((out2 / "volumes.csv"));
  std::stringstream sa, sb;
  sa << va.rdbuf();
  sb << vb.rdbuf();
  if (sa.str() != sb.str() || sa.str().empty()) {
    note("volumes.csv differ");
    return false;
  }
  std::ifstream ca((out1 / "candidates.csv")), cb((out2 / "candidates.csv"));
  std::stringstream sca, scb;
  sca << ca.rdbuf();
  scb << cb.rdbuf();
  if (sca.str() != scb.str()) {
    note("candidates.csv differ");
    return false;
  }

  // The house run must produce at least one committed iteration and end
  // with most of the world mapped; its volume samples obey the accounting
  // invariants as parsed from disk.
  const auto metrics = readCsv((out1 / "metrics.csv").string());
  const auto volumes = readCsv((out1 / "volumes.csv").string());
  if (metrics.size() < 2 || volumes.size() < 2) return false;
  double prev_explored = -1.0;
  for (std::size_t r = 1; r < volumes.size(); ++r) {
    const double free = std::stod(volumes[r][1]);
    const double occ = std::stod(volumes[r][2]);
    const double unknown = std::stod(volumes[r][3]);
    if (std::abs(free + occ + unknown - 1.0) > 1e-9) {
      note("volume row " + std::to_string(r) + " does not sum to 1");
      return false;
    }
    // Tolerance sits above the 12-decimal print rounding (~1e-12 per sum)
    // and far below a single voxel's fraction.
    if (free + occ < prev_explored - 1e-10) {
      note("explored fraction decreased at row " + std::to_string(r));
      return false;
    }
    prev_explored = free + occ;
  }
  const double final_unknown = std::stod(volumes.back().back());
  note("house iterations=" + std::to_string(metrics.size() - 1) +
       ", final unknown=" + std::to_string(final_unknown));
  return final_unknown < 0.1;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_cli_path = argv[1];
  if (argc > 2) g_scenario_dir = argv[2];
  if (g_scenario_dir.empty()) g_scenario_dir = "scenarios";

  struct Criterion {
    std::string name;
    std::function<bool()> fn;
  };

  DeskRunResult desk;
  bool desk_ran = false;
  auto ensureDesk = [&] {
    if (!desk_ran) {
      desk = criterionDeskScaleRun();
      desk_ran = true;
    }
  };

  const std::vector<Criterion> criteria = {
      {"1 lambda worked example (0.1386 within 1e-4, round trip 1e-12)",
       criterionLambdaWorkedExample},
      {"2 frontier oracle equivalence (200 sequences, <= 32^3, < 60 s)",
       criterionFrontierOracle},
      {"3 parent-clustering containment oracle (100 sets, 3 depths)",
       criterionParentClusteringOracle},
      {"4 mean-shift blob recovery (20 seeds, 3 blobs)", criterionMeanShiftRecovery},
      {"5 volume accounting (sum to 1 within 1e-9, monotone explored)",
       [&] {
         ensureDesk();
         return desk.volumes_ok;
       }},
      {"6 desk-scale house run (reachable unknown < 5%, 0 collisions, < 5 min)",
       [&] {
         ensureDesk();
         return desk.run_ok;
       }},
      {"7 scalability (R^2 >= 0.9, iteration at |Fg|=1e5 < 0.5 s)", criterionScalability},
      {"8 selection properties (scale invariance, lambda limits)",
       criterionSelectionProperties},
      {"9 CLI determinism (house.json --seed 7, byte-identical CSVs)",
       criterionCliDeterminism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    g_notes.clear();
    bool ok = false;
    try {
      ok = c.fn();
    } catch (const std::exception& e) {
      g_notes.push_back(std::string("exception: ") + e.what());
    }
    std::printf("[%s] criterion %s\n", ok ? "PASS" : "FAIL", c.name.c_str());
    for (const auto& n : g_notes) std::printf("       %s\n", n.c_str());
    if (!ok) ++failures;
  }

  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
