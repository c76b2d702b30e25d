#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mrfe/bench.hpp"
#include "mrfe/exploration_loop.hpp"
#include "mrfe/frontier_detection.hpp"
#include "mrfe/logging.hpp"
#include "mrfe/metrics_io.hpp"
#include "mrfe/scenario.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitBadScenario = 2;
constexpr int kExitTimeCap = 3;

struct RunArgs {
  std::string scenario_path;
  std::string out_dir = ".";
  std::string dump_frontier_dir;
  std::string replay_path;
  std::string record_scans_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> lambda;
  std::optional<double> bandwidth;
  std::optional<int> d_exp;
  std::optional<double> r_max;
  double wall_cap = 0.0;
  bool dry_run = false;
};

void printDerivedParameters(const mrfe::Scenario& s) {
  const auto dims_for = [&](double r) {
    const Eigen::Vector3d e = s.world.bounds.extent();
    return Eigen::Vector3i(static_cast<int>(std::ceil(e.x() / r - 1e-9)),
                           static_cast<int>(std::ceil(e.y() / r - 1e-9)),
                           static_cast<int>(std::ceil(e.z() / r - 1e-9)));
  };
  const Eigen::Vector3i dims = dims_for(s.planner.r_max);
  std::cout << "scenario:        " << s.name << "\n"
            << "bounds:          " << mrfe::toString(s.world.bounds) << " m\n"
            << "obstacles:       " << s.world.obstacles.size() << "\n"
            << "r_max:           " << s.planner.r_max << " m\n"
            << "d_max:           " << s.planner.d_max << "\n"
            << "d_exp:           " << s.planner.d_exp << "\n"
            << "r_exp:           " << mrfe::explorationEdge(s.planner) << " m\n"
            << "bandwidth:       " << s.planner.bandwidth << " m\n"
            << "lambda:          " << s.planner.lambda << " 1/m\n"
            << "gain cube side:  " << mrfe::gainCubeSide(s.planner, s.sensor) << " m\n"
            << "N_s:             " << s.planner.scans_per_submap << " scans/submap\n"
            << "safety margin:   " << s.planner.safety_margin << " m\n"
            << "sensor range:    " << s.sensor.max_range << " m\n"
            << "fine grid:       " << dims.x() << " x " << dims.y() << " x " << dims.z() << " = "
            << (static_cast<long long>(dims.x()) * dims.y() * dims.z()) << " voxels\n"
            << "seed:            " << s.seed << "\n";
}

int runCommand(const RunArgs& args) {
  mrfe::Scenario scenario;
  try {
    scenario = mrfe::loadScenario(args.scenario_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadScenario;
  }

  if (args.seed) scenario.seed = *args.seed;
  if (args.lambda) scenario.planner.lambda = *args.lambda;
  if (args.bandwidth) scenario.planner.bandwidth = *args.bandwidth;
  if (args.d_exp) scenario.planner.d_exp = *args.d_exp;
  if (args.r_max) scenario.planner.r_max = *args.r_max;
  try {
    mrfe::validateScenario(scenario);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadScenario;
  }

  if (args.dry_run) {
    printDerivedParameters(scenario);
    return kExitOk;
  }

  fs::create_directories(args.out_dir);
  std::ofstream metrics_csv(fs::path(args.out_dir) / "metrics.csv");
  std::ofstream volumes_csv(fs::path(args.out_dir) / "volumes.csv");
  std::ofstream candidates_csv(fs::path(args.out_dir) / "candidates.csv");
  if (!metrics_csv || !volumes_csv || !candidates_csv) {
    std::cerr << "error: cannot create output files in '" << args.out_dir << "'\n";
    return kExitError;
  }
  metrics_csv << mrfe::kIterationCsvHeader << "\n" << std::flush;
  volumes_csv << mrfe::kVolumeCsvHeader << "\n" << std::flush;
  candidates_csv << mrfe::kCandidateCsvHeader << "\n" << std::flush;

  if (!args.dump_frontier_dir.empty()) fs::create_directories(args.dump_frontier_dir);

  mrfe::RunOptions options;
  options.wall_clock_cap_s = args.wall_cap;
  options.on_iteration = [&](const mrfe::IterationMetrics& m) {
    metrics_csv << mrfe::iterationCsvRow(m) << "\n" << std::flush;
    for (const auto& row : mrfe::candidateCsvRows(m)) candidates_csv << row << "\n";
    candidates_csv << std::flush;
  };
  options.on_volume = [&](const mrfe::VolumeSample& v) {
    volumes_csv << mrfe::volumeCsvRow(v) << "\n" << std::flush;
  };
  if (!args.dump_frontier_dir.empty()) {
    options.on_waypoint = [&](int iteration, const mrfe::OccupancyOctree& octree,
                              const mrfe::FrontierSet& frontiers) {
      char name[64];
      std::snprintf(name, sizeof(name), "frontier_%04d.txt", iteration);
      std::ofstream out(fs::path(args.dump_frontier_dir) / name);
      mrfe::writeFrontierDump(out, octree, frontiers.global);
    };
  }

  std::vector<mrfe::LidarScan> recorded;
  if (!args.record_scans_path.empty()) {
    options.on_scan = [&](const mrfe::LidarScan& scan) { recorded.push_back(scan); };
  }

  mrfe::MetricsLog log;
  try {
    if (!args.replay_path.empty()) {
      const auto scans = mrfe::loadScans(args.replay_path);
      log = mrfe::runReplay(scenario, scans, options);
    } else {
      log = mrfe::runExploration(scenario, options);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }

  if (!args.record_scans_path.empty()) mrfe::saveScans(args.record_scans_path, recorded);

  const std::string summary = mrfe::summaryJson(log, scenario.name);
  std::ofstream(fs::path(args.out_dir) / "summary.json") << summary << "\n";
  std::cout << summary << "\n";

  if (log.summary.termination_reason == "wall_clock_cap" ||
      log.summary.termination_reason == "sim_time_cap")
    return kExitTimeCap;
  return kExitOk;
}

int benchCommand(const std::vector<std::size_t>& sizes, std::uint64_t seed,
                 const std::string& out_path) {
  const mrfe::BenchReport report = mrfe::runBench(sizes, seed);

  std::cout << "size_requested,frontier,parents,candidates,t_detect,t_cluster,t_select,t_total\n";
  for (const auto& c : report.cases) {
    std::printf("%zu,%zu,%zu,%zu,%.6f,%.6f,%.6f,%.6f\n", c.requested, c.frontier, c.parents,
                c.candidates, c.t_detect, c.t_cluster, c.t_select, c.t_total);
  }
  std::printf("linear fit: t_total = %.3e * |Fg| + %.3e   (R^2 = %.4f)\n", report.fit.slope,
              report.fit.intercept, report.fit.r_squared);

  if (!out_path.empty()) {
    nlohmann::ordered_json j;
    j["seed"] = report.seed;
    j["slope_s_per_voxel"] = report.fit.slope;
    j["intercept_s"] = report.fit.intercept;
    j["r_squared"] = report.fit.r_squared;
    auto& cases = j["cases"];
    for (const auto& c : report.cases) {
      nlohmann::ordered_json cj;
      cj["requested"] = c.requested;
      cj["frontier"] = c.frontier;
      cj["parents"] = c.parents;
      cj["candidates"] = c.candidates;
      cj["t_detect_s"] = c.t_detect;
      cj["t_cluster_s"] = c.t_cluster;
      cj["t_select_s"] = c.t_select;
      cj["t_total_s"] = c.t_total;
      cases.push_back(cj);
    }
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "error: cannot write '" << out_path << "'\n";
      return kExitError;
    }
    out << j.dump(2) << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mrfe - multi-resolution frontier exploration planner"};
  app.require_subcommand(1);

  RunArgs run_args;
  CLI::App* run = app.add_subcommand("run", "run an exploration scenario");
  run->add_option("scenario", run_args.scenario_path, "scenario JSON file")->required();
  run->add_option("--out-dir", run_args.out_dir, "output directory for CSV/JSON files");
  run->add_option("--dump-frontier", run_args.dump_frontier_dir,
                  "write per-iteration frontier dumps into this directory");
  run->add_option("--replay", run_args.replay_path,
                  "replay a recorded scan file instead of simulating");
  run->add_option("--record-scans", run_args.record_scans_path,
                  "write every simulated scan to this replay file");
  run->add_option("--seed", run_args.seed, "override scenario seed");
  run->add_option("--lambda", run_args.lambda, "override distance weight lambda (1/m)");
  run->add_option("--bandwidth", run_args.bandwidth, "override mean-shift bandwidth (m)");
  run->add_option("--d-exp", run_args.d_exp, "override exploration depth");
  run->add_option("--r-max", run_args.r_max, "override finest voxel edge (m)");
  run->add_option("--wall-cap", run_args.wall_cap, "wall-clock cap in seconds (0 = off)");
  run->add_flag("--dry-run", run_args.dry_run, "print derived parameters and exit");

  std::vector<std::size_t> bench_sizes{1000, 10000, 100000};
  std::uint64_t bench_seed = 1;
  std::string bench_out;
  CLI::App* bench = app.add_subcommand("bench", "scalability benchmark on synthetic frontiers");
  bench->add_option("--sizes", bench_sizes, "frontier sizes to sweep")->delimiter(',');
  bench->add_option("--seed", bench_seed, "generator seed");
  bench->add_option("--out", bench_out, "write a JSON report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (run->parsed()) return runCommand(run_args);
  if (bench->parsed()) return benchCommand(bench_sizes, bench_seed, bench_out);
  return kExitError;
}
