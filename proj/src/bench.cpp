#include "mrfe/bench.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mrfe/frontier_clustering.hpp"
#include "mrfe/frontier_detection.hpp"
#include "mrfe/stopwatch.hpp"
#include "mrfe/target_selection.hpp"

namespace mrfe {

namespace {

constexpr double kBenchResolution = 0.5;
constexpr int kBenchDepth = 16;
constexpr int kBenchExplorationDepth = 14;  // r_exp = 2 m
constexpr double kBenchBandwidth = 2.0;
constexpr double kBenchGainCube = 5.0;
constexpr double kBenchLambda = 0.1386;

}  // namespace

SyntheticFrontier generateSyntheticFrontier(std::size_t target_frontier, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ull * (target_frontier + 1)));

  // Eight hollow free shells on a jittered 2x2x2 lattice. A shell of
  // thickness one is frontier everywhere: free, with unknown outside and
  // unknown core inside, so |F_g| tracks the shell voxel count.
  constexpr int kLattice = 2;
  const auto per_blob = static_cast<double>(target_frontier) / (kLattice * kLattice * kLattice);
  const int side = std::max(3, static_cast<int>(std::lround(1.0 + std::sqrt(per_blob / 6.0))));

  const int gap = 8;
  const int cell = side + gap;
  const int dim = kLattice * cell + gap;

  Aabb bounds;
  bounds.min = Eigen::Vector3d::Zero();
  bounds.max = Eigen::Vector3d::Constant(dim * kBenchResolution);
  OccupancyOctree octree(kBenchResolution, bounds, kBenchDepth);

  ChangeSet changed;
  std::uniform_int_distribution<int> jitter(0, gap / 2);
  for (int bz = 0; bz < kLattice; ++bz)
    for (int by = 0; by < kLattice; ++by)
      for (int bx = 0; bx < kLattice; ++bx) {
        const Eigen::Vector3i base(gap / 2 + bx * cell + jitter(rng),
                                   gap / 2 + by * cell + jitter(rng),
                                   gap / 2 + bz * cell + jitter(rng));
        for (int z = 0; z < side; ++z)
          for (int y = 0; y < side; ++y)
            for (int x = 0; x < side; ++x) {
              const bool shell = x == 0 || y == 0 || z == 0 || x == side - 1 ||
                                 y == side - 1 || z == side - 1;
              if (!shell) continue;
              const VoxelKey k{base.x() + x, base.y() + y, base.z() + z, kBenchDepth};
              octree.setState(k, VoxelState::Free);
              changed.push_back(k);
            }
      }
  std::sort(changed.begin(), changed.end());

  return SyntheticFrontier{std::move(octree), std::move(changed), bounds.center()};
}

LinearFit fitLinear(const std::vector<double>& xs, const std::vector<double>& ys) {
  LinearFit fit;
  const std::size_t n = xs.size();
  if (n < 2 || ys.size() != n) return fit;

  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;

  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res += e * e;
  }
  fit.r_squared = syy == 0.0 ? 1.0 : std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  return fit;
}

BenchReport runBench(const std::vector<std::size_t>& sizes, std::uint64_t seed) {
  BenchReport report;
  report.seed = seed;

  for (const std::size_t size : sizes) {
    SyntheticFrontier sf = generateSyntheticFrontier(size, seed);

    BenchCase bc;
    bc.requested = size;

    Stopwatch sw;
    FrontierSet frontiers;
    const VoxelKeySet local = updateLocalFrontier(sf.octree, sf.changed);
    updateGlobalFrontier(frontiers, local, sf.octree);
    bc.t_detect = sw.elapsed();
    bc.frontier = frontiers.global.size();

    const ExplorationConfig cfg =
        makeExplorationConfig(sf.octree, kBenchExplorationDepth, kBenchBandwidth);
    sw.restart();
    const CandidateSet cs = clusterFrontier(sf.octree, frontiers.global, cfg);
    bc.t_cluster = sw.elapsed();
    bc.parents = cs.parents.size();
    bc.candidates = cs.candidates.size();

    const GainParams gains{kBenchLambda, kBenchGainCube};
    sw.restart();
    const std::vector<ScoredCandidate> scored =
        scoreCandidates(sf.octree, sf.robot, cs.candidates, gains);
    (void)selectBest(scored);
    bc.t_select = sw.elapsed();

    bc.t_total = bc.t_detect + bc.t_cluster + bc.t_select;
    report.cases.push_back(bc);
  }

  std::vector<double> xs, ys;
  for (const auto& bc : report.cases) {
    xs.push_back(static_cast<double>(bc.frontier));
    ys.push_back(bc.t_total);
  }
  report.fit = fitLinear(xs, ys);
  return report;
}

}  // namespace mrfe
