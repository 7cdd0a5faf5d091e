// Acceptance suite: one test case per release criterion, each printing a
// PASS/FAIL line. Scenario-driven criteria run the real pipeline on the
// checked-in configs; the determinism criterion shells out to the CLI binary.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "exomap/classification.hpp"
#include "exomap/fusion.hpp"
#include "exomap/graph_optimizer.hpp"
#include "exomap/grid_io.hpp"
#include "exomap/localizer.hpp"
#include "exomap/pipeline.hpp"
#include "exomap/recon.hpp"
#include "exomap/rng.hpp"
#include "exomap/rpe.hpp"

using namespace exomap;
namespace fs = std::filesystem;

namespace {

double nowSeconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

void report(int criterion, const std::string& what, bool ok) {
  std::printf("[%s] criterion %2d: %s\n", ok ? "PASS" : "FAIL", criterion, what.c_str());
  std::fflush(stdout);
  CHECK_MESSAGE(ok, "criterion ", criterion, ": ", what);
}

fs::path configPath(const std::string& name) {
  return fs::path(EXOMAP_CONFIG_DIR) / name;
}

fs::path scratchDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "exomap_acceptance" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

double sortMedian(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

// Staircase-scenario pipeline artifacts shared by criteria 3 and 4.
struct StaircaseRun {
  fs::path dir;
  double chain_seconds = 0.0;
  double traversability_seconds = 0.0;
  ReconError recon;
  double step_f_at_half = 0.0;
  double step_best_f = 0.0;
  double normals_best_f = 0.0;
};

const StaircaseRun& staircaseRun() {
  static StaircaseRun run = [] {
    StaircaseRun r;
    r.dir = scratchDir("staircase");
    const PipelineConfig config = loadPipelineConfig(configPath("staircase.toml").string());
    const std::string out = r.dir.string();

    const double t0 = nowSeconds();
    runSimulate(config, out);
    runMap(config, out);
    runFuse(config, out);
    const double t1 = nowSeconds();
    runTraverse(config, out);
    runEvalTrav(config, out);
    const double t2 = nowSeconds();
    runEvalRecon(config, out);
    const double t3 = nowSeconds();
    r.chain_seconds = t3 - t0;
    r.traversability_seconds = t2 - t1;

    // recon.csv: label,mean_cm,max_cm,p90_cm,samples
    std::ifstream recon(r.dir / "recon.csv");
    std::string line;
    std::getline(recon, line);
    std::getline(recon, line);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream rs(line);
    std::string label;
    rs >> label >> r.recon.mean_cm >> r.recon.max_cm >> r.recon.p90_cm >> r.recon.sample_count;

    // trav_summary.csv: room,method,best_threshold,best_f,f_at_0p5
    std::ifstream summary(r.dir / "trav_summary.csv");
    std::getline(summary, line);
    while (std::getline(summary, line)) {
      std::stringstream ss(line);
      std::string room, method, field;
      std::getline(ss, room, ',');
      std::getline(ss, method, ',');
      if (room != "room_00.exgm") continue;
      std::getline(ss, field, ',');  // best_threshold
      std::getline(ss, field, ',');
      const double best_f = std::stod(field);
      std::getline(ss, field, ',');
      const double f_half = std::stod(field);
      if (method == "step_height") {
        r.step_best_f = best_f;
        r.step_f_at_half = f_half;
      } else if (method == "normals") {
        r.normals_best_f = best_f;
      }
    }
    return r;
  }();
  return run;
}

}  // namespace

TEST_CASE("criterion 1: median fusion matches the sort-median brute force") {
  const double t0 = nowSeconds();
  Rng rng(1001);
  bool exact = true;
  for (int trial = 0; trial < 1000 && exact; ++trial) {
    const int rows = 1 + static_cast<int>(rng.uniformInt(50));
    const int cols = 1 + static_cast<int>(rng.uniformInt(50));
    const int count = 1 + static_cast<int>(rng.uniformInt(10));
    std::vector<MultiLayerGrid> stack;
    for (int s = 0; s < count; ++s) {
      MultiLayerGrid g(GridGeometry(0.05, {0, 0}, rows, cols), "map");
      for (auto& v : g.layer("elevation").values) {
        v = (rng.uniform() < 0.3) ? kUnknown : rng.uniform(-2.0, 2.0);
      }
      stack.push_back(std::move(g));
    }
    const RoomTerrainMap fused = fuseRoom(stack);
    for (int r = 0; r < rows && exact; ++r) {
      for (int c = 0; c < cols && exact; ++c) {
        std::vector<double> heights;
        for (const auto& g : stack) {
          const double h = g.at("elevation", {r, c});
          if (isKnown(h)) heights.push_back(h);
        }
        const double got = fused.grid.at("elevation", {r, c});
        if (heights.empty()) {
          exact = !isKnown(got) && fused.grid.at("support_count", {r, c}) == 0.0;
        } else {
          exact = (got == sortMedian(heights)) &&
                  fused.grid.at("support_count", {r, c}) ==
                      static_cast<double>(heights.size());
        }
      }
    }
  }
  const double elapsed = nowSeconds() - t0;
  report(1, "fuseRoom == sort-median oracle on 1000 random stacks (" +
                std::to_string(elapsed).substr(0, 4) + " s)",
         exact && elapsed < 10.0);
}

TEST_CASE("criterion 2: step-height scoring matches the brute force and the analytic staircase") {
  // Exact equality against a naive double loop on random 100x100 grids.
  Rng rng(2002);
  bool exact = true;
  const TraversabilityParams params;  // stride and step height at defaults
  for (int trial = 0; trial < 2 && exact; ++trial) {
    MultiLayerGrid g(GridGeometry(0.02, {0, 0}, 100, 100), "map");
    for (auto& v : g.layer("elevation").values) {
      v = (rng.uniform() < 0.2) ? kUnknown : rng.uniform(-0.3, 0.3);
    }
    const TraversabilityMap fast = scoreMap(g, params);
    for (int r = 0; r < 100 && exact; ++r) {
      for (int c = 0; c < 100 && exact; ++c) {
        const double center = g.at("elevation", {r, c});
        if (!isKnown(center)) {
          exact = !isKnown(fast.at({r, c}));
          continue;
        }
        double h_max = 0.0;
        int support = 0;
        for (int rr = 0; rr < 100; ++rr) {
          for (int cc = 0; cc < 100; ++cc) {
            const double dx = (cc - c) * 0.02, dy = (rr - r) * 0.02;
            if (dx * dx + dy * dy > params.stride_radius * params.stride_radius) continue;
            const double h = g.at("elevation", {rr, cc});
            if (!isKnown(h)) continue;
            if (rr != r || cc != c) ++support;
            h_max = std::max(h_max, std::abs(h - center));
          }
        }
        if (support < params.min_support) {
          exact = !isKnown(fast.at({r, c}));
        } else {
          exact = fast.at({r, c}) == 1.0 - std::min(h_max / params.step_height, 1.0);
        }
      }
    }
  }
  report(2, "scoreMap == double-loop oracle on random 100x100 grids", exact);

  // Analytic staircase: riser 0.10, s* = h* = 0.20.
  SceneSpec spec;
  RoomSpec room;
  room.polygon = {{0, 0}, {8, 0}, {8, 5}, {0, 5}};
  room.class_name = "lab";
  spec.rooms.push_back(room);
  StairSpec stair;
  stair.origin = {3.0, 2.5};
  stair.riser = 0.10;
  stair.tread = 0.30;
  stair.steps = 5;
  stair.width = 1.6;
  spec.stairs.push_back(stair);
  WallSpec wall;
  wall.p0 = {1.0, 1.0};
  wall.p1 = {1.0, 4.0};
  wall.height = 1.0;
  spec.walls.push_back(wall);
  const Scene scene = buildScene(spec);

  const GridGeometry geom(0.02, {0.01, 0.01}, 249, 399);
  const MultiLayerGrid truth = scene.sampleHeightfield(geom);
  const TraversabilityMap scores = scoreMap(truth, TraversabilityParams{});

  // Tread cell within reach of exactly one riser.
  const CellIndex tread = geom.worldToCell({3.25, 2.5});
  const double tread_score = scores.at(tread);
  // Open floor and a wall-adjacent cell.
  const double floor_score = scores.at(geom.worldToCell({6.5, 1.0}));
  const double wall_score = scores.at(geom.worldToCell({1.11, 2.5}));

  const bool staircase_ok = std::abs(tread_score - 0.5) < 1e-12 && floor_score == 1.0 &&
                            wall_score == 0.0;
  report(2, "analytic staircase scores: tread 0.500+-1e-12, floor 1.0, wall-adjacent 0.0",
         staircase_ok);
}

TEST_CASE("criterion 3: step-height classification beats the normals baseline") {
  const StaircaseRun& run = staircaseRun();
  const bool ok = run.step_f_at_half >= 0.90 && run.step_f_at_half > run.normals_best_f &&
                  run.traversability_seconds < 30.0;
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "step F@0.5 = %.3f (>= 0.90), normals best F = %.3f, eval %.1f s",
                run.step_f_at_half, run.normals_best_f, run.traversability_seconds);
  report(3, buf, ok);
}

TEST_CASE("criterion 4: staircase reconstruction error within budget") {
  const StaircaseRun& run = staircaseRun();
  const bool ok = run.recon.mean_cm <= 1.0 && run.recon.p90_cm <= 2.0 &&
                  run.chain_seconds < 120.0 && run.recon.sample_count > 10000;
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "pipeline mean = %.3f cm (<= 1.0), p90 = %.3f cm (<= 2.0), chain %.1f s",
                run.recon.mean_cm, run.recon.p90_cm, run.chain_seconds);
  report(4, buf, ok);
}

TEST_CASE("criterion 5: relative pose error metric consistency") {
  // 4%/m scale drift on a straight 10 m path: RPE at 5 m = 0.20 m +-10%.
  Trajectory gt;
  for (int i = 0; i <= 1000; ++i) gt.append(0.01 * i, SE3::fromTranslation(0.01 * i, 0, 0));
  DriftConfig drift;
  drift.translation_drift_per_m = 0.04;
  const Trajectory est = corruptOdometry(gt, drift);
  const RpeResult r = rpe(est, gt, 5.0);
  const bool drift_ok = std::abs(r.translation_rmse - 0.20) <= 0.02;

  // rpe(x, x, d) is exactly zero.
  Rng rng(55);
  Trajectory wiggly;
  SE3 pose;
  for (int i = 0; i < 400; ++i) {
    pose = pose * SE3::fromTranslation(0.05, rng.uniform(-0.01, 0.01), 0.0) *
           SE3::rotZ(rng.uniform(-0.05, 0.05));
    wiggly.append(0.1 * i, pose);
  }
  bool self_zero = true;
  for (double d : {1.0, 5.0}) {
    const RpeResult self = rpe(wiggly, wiggly, d);
    self_zero = self_zero && self.translation_rmse == 0.0 && self.rotation_rmse == 0.0;
  }

  // Rigid-transform invariance, on a generic (wiggly) pair so the distance
  // pairing has no knife-edge crossings.
  Trajectory wiggly_est;
  for (const auto& e : wiggly.entries) {
    wiggly_est.append(e.stamp, e.pose * SE3::exp((Vector6d() << 0.01, -0.005, 0.002, 0.001,
                                                  -0.002, 0.004)
                                                     .finished()));
  }
  const RpeResult base = rpe(wiggly_est, wiggly, 5.0);
  Trajectory moved_est, moved_gt;
  const SE3 g_rigid =
      SE3(Eigen::Quaterniond(Eigen::AngleAxisd(1.1, Eigen::Vector3d(1, 2, 3).normalized())),
          Eigen::Vector3d(4, -2, 7));
  for (const auto& e : wiggly_est.entries) moved_est.append(e.stamp, g_rigid * e.pose);
  for (const auto& e : wiggly.entries) moved_gt.append(e.stamp, g_rigid * e.pose);
  const RpeResult moved1 = rpe(moved_est, wiggly, 5.0);
  const RpeResult moved2 = rpe(wiggly_est, moved_gt, 5.0);
  const bool invariant = std::abs(moved1.translation_rmse - base.translation_rmse) < 1e-9 &&
                         std::abs(moved2.translation_rmse - base.translation_rmse) < 1e-9 &&
                         std::abs(moved1.rotation_rmse - base.rotation_rmse) < 1e-9 &&
                         std::abs(moved2.rotation_rmse - base.rotation_rmse) < 1e-9;

  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "rpe@5m of 4%%/m drift = %.4f m, self-rpe exactly zero: %d, rigid-invariant: %d",
                r.translation_rmse, self_zero, invariant);
  report(5, buf, drift_ok && self_zero && invariant);
}

TEST_CASE("criterion 6: pose-graph optimization closed form and loop closure") {
  // 1D two-factor case: odometry says 1, loop says 2 -> optimum 1.5, cost 0.5.
  PoseGraph case1d(SpacingPolicy{0.5, 0.5}, {});
  case1d.setOdometryInformation(Matrix6d::Identity());
  case1d.addNodeIfSpaced(SE3(), 0.0);
  case1d.addNodeIfSpaced(SE3::fromTranslation(1, 0, 0), 1.0);
  case1d.addLoopClosure(0, 1, SE3::fromTranslation(2, 0, 0), Matrix6d::Identity());
  case1d.nodes()[1].pose = SE3::fromTranslation(2, 0, 0);
  const OptimizeResult res = optimize(case1d);
  const bool closed_form = std::abs(case1d.nodes()[1].pose.translation().x() - 1.5) < 1e-9 &&
                           std::abs(res.final_cost - 0.5) < 1e-9;

  // Seeded 20-node square loop with one exact closure halves the error.
  const int n = 20;
  std::vector<SE3> gt;
  SE3 pose;
  gt.push_back(pose);
  for (int i = 1; i < n; ++i) {
    SE3 step = SE3::fromTranslation(1.0, 0.0, 0.0);
    if (i % 5 == 0) step = step * SE3::rotZ(M_PI / 2.0);
    pose = pose * step;
    gt.push_back(pose);
  }
  Rng rng(2024);
  PoseGraph loop(SpacingPolicy{0.5, 30.0 * M_PI / 180.0}, {});
  loop.setOdometryInformation(Matrix6d::Identity() * 100.0);
  loop.addNodeIfSpaced(gt[0], 0.0);
  SE3 integrated = gt[0];
  std::vector<SE3> odom_only{integrated};
  for (int i = 1; i < n; ++i) {
    Vector6d noise;
    noise << rng.gaussian(0, 0.03), rng.gaussian(0, 0.03), 0.0, 0.0, 0.0, rng.gaussian(0, 0.02);
    integrated = integrated * ((gt[i - 1].inverse() * gt[i]) * SE3::exp(noise));
    odom_only.push_back(integrated);
    loop.addNodeIfSpaced(integrated, i);
  }
  loop.addLoopClosure(n - 1, 0, gt[n - 1].inverse() * gt[0], Matrix6d::Identity() * 1e4);
  const auto ate = [&](auto&& poseOf) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += (poseOf(i).translation() - gt[i].translation()).squaredNorm();
    return std::sqrt(sum / n);
  };
  const double before = ate([&](int i) { return odom_only[static_cast<std::size_t>(i)]; });
  optimize(loop);
  const double after = ate([&](int i) { return loop.node(i).pose; });
  const bool halved = after <= 0.5 * before;

  char buf[160];
  std::snprintf(buf, sizeof(buf), "1D optimum ok: %d; square-loop ATE %.3f -> %.3f m (>=50%% cut)",
                closed_form, before, after);
  report(6, buf, closed_form && halved);
}

TEST_CASE("criterion 7: PnP recovery accuracy and robustness") {
  const CameraIntrinsics k;
  Rng rng(7007);
  bool zero_noise_ok = true;
  double worst = 0.0;
  for (int trial = 0; trial < 500 && zero_noise_ok; ++trial) {
    const Eigen::Vector3d axis =
        Eigen::Vector3d(rng.gaussian(), rng.gaussian(), rng.gaussian()).normalized();
    const SE3 pose(Eigen::Quaterniond(Eigen::AngleAxisd(rng.uniform(-0.6, 0.6), axis)),
                   Eigen::Vector3d(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-0.5, 0.5)));
    std::vector<Correspondence2D3D> correspondences;
    while (correspondences.size() < 25) {
      const Eigen::Vector3d p_cam(rng.uniform(-1.5, 1.5), rng.uniform(-1.0, 1.0),
                                  rng.uniform(1.5, 6.0));
      const Eigen::Vector3d p_map = pose * p_cam;
      Eigen::Vector2d px;
      if (!projectPoint(pose, k, p_map, px)) continue;
      correspondences.push_back({px, p_map});
    }
    PnpConfig config;
    config.min_inliers = 6;
    config.seed = static_cast<std::uint64_t>(trial);
    const PnpResult result = pnpRansac(correspondences, k, config);
    const double err = std::max((result.pose.translation() - pose.translation()).norm(),
                                (result.pose.inverse() * pose).rotationAngle());
    worst = std::max(worst, err);
    zero_noise_ok = err <= 1e-8;
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf), "zero-noise recovery over 500 trials, worst error %.2e", worst);
  report(7, buf, zero_noise_ok);

  // 30% outliers, zero inlier noise.
  const SE3 pose(Eigen::Quaterniond(Eigen::AngleAxisd(0.5, Eigen::Vector3d::UnitZ())),
                 Eigen::Vector3d(1.0, 0.5, 0.2));
  std::vector<Correspondence2D3D> correspondences;
  std::vector<bool> truth;
  while (correspondences.size() < 100) {
    const Eigen::Vector3d p_cam(rng.uniform(-1.5, 1.5), rng.uniform(-1.0, 1.0),
                                rng.uniform(1.5, 6.0));
    const Eigen::Vector3d p_map = pose * p_cam;
    Eigen::Vector2d px;
    if (!projectPoint(pose, k, p_map, px)) continue;
    if (correspondences.size() >= 70) {
      Eigen::Vector2d bad(rng.uniform(0, k.width), rng.uniform(0, k.height));
      if ((bad - px).norm() < 25.0) continue;
      correspondences.push_back({bad, p_map});
      truth.push_back(false);
    } else {
      correspondences.push_back({px, p_map});
      truth.push_back(true);
    }
  }
  PnpConfig config;
  config.seed = 99;
  const PnpResult result = pnpRansac(correspondences, k, config);
  bool mask_ok = true;
  for (std::size_t i = 0; i < truth.size(); ++i) mask_ok &= (result.inlier_mask[i] == truth[i]);
  const bool outlier_ok = (result.pose.translation() - pose.translation()).norm() <= 1e-6 &&
                          (result.pose.inverse() * pose).rotationAngle() <= 1e-6 && mask_ok;
  report(7, "30% outlier recovery to 1e-6 with complete inlier identification", outlier_ok);

  bool too_few_ok = false;
  try {
    pnpRansac({{{100, 100}, {0, 0, 2}}, {{150, 120}, {0.5, 0, 2}}, {{120, 150}, {0, 0.5, 2}}}, k);
  } catch (const InvalidArgumentError&) {
    too_few_ok = true;
  }
  report(7, "fewer than 4 correspondences rejected cleanly", too_few_ok);
}

TEST_CASE("criterion 8: relocalization over the 80 m revisit run") {
  const fs::path dir = scratchDir("revisit");
  const PipelineConfig config = loadPipelineConfig(configPath("revisit.toml").string());
  runSimulate(config, dir.string());
  runMap(config, dir.string());
  runLocalize(config, dir.string());

  const Trajectory gt = readTumTrajectory((dir / "revisit_gt_trajectory.tum").string());
  const Trajectory localized = readTumTrajectory((dir / "localized_trajectory.tum").string());
  REQUIRE(gt.size() == localized.size());

  // Path length sanity: the scenario walks at least 80 m.
  double length = 0.0;
  for (std::size_t i = 1; i < gt.size(); ++i) {
    length += (gt[i].pose.translation() - gt[i - 1].pose.translation()).norm();
  }

  std::vector<double> fix_stamps;
  {
    std::ifstream fixes(dir / "fixes.csv");
    std::string line;
    std::getline(fixes, line);
    while (std::getline(fixes, line)) {
      if (!line.empty()) fix_stamps.push_back(std::stod(line.substr(0, line.find(','))));
    }
  }

  // Position error right after each fix and the drift-model bound between
  // fixes: error <= 0.05 + 1.2 * drift_rate * distance-since-fix.
  const double drift_rate = config.revisit_drift.translation_drift_per_m;
  double worst_fix_error = 0.0;
  bool bound_ok = true;
  std::size_t fix_cursor = 0;
  double dist_since_fix = 0.0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (i > 0) {
      dist_since_fix += (gt[i].pose.translation() - gt[i - 1].pose.translation()).norm();
    }
    while (fix_cursor < fix_stamps.size() && gt[i].stamp >= fix_stamps[fix_cursor] - 1e-9) {
      dist_since_fix = 0.0;
      ++fix_cursor;
    }
    const double err =
        (localized[i].pose.translation() - gt[i].pose.translation()).norm();
    if (dist_since_fix == 0.0 && fix_cursor > 0) worst_fix_error = std::max(worst_fix_error, err);
    bound_ok = bound_ok && err <= 0.05 + 1.2 * drift_rate * dist_since_fix;
  }

  const bool ok = length >= 80.0 && fix_stamps.size() >= 50 && worst_fix_error <= 0.05 && bound_ok;
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "%.0f m run: %zu fixes (>=50), worst post-fix error %.3f m (<=0.05), bound ok: %d",
                length, fix_stamps.size(), worst_fix_error, bound_ok);
  report(8, buf, ok);
}

TEST_CASE("criterion 9: CLI commands are byte-deterministic") {
  const fs::path base = scratchDir("determinism");
  const std::string config = configPath("mini.toml").string();
  const char* commands[] = {"simulate", "map",      "fuse",      "traverse",
                            "localize", "eval-rpe", "eval-recon", "eval-trav"};

  bool ran = true;
  for (const char* run_name : {"a", "b"}) {
    const fs::path out = base / run_name;
    fs::create_directories(out);
    for (const char* command : commands) {
      const std::string invocation = std::string("\"") + EXOMAP_CLI_PATH + "\" " + command +
                                     " --config \"" + config + "\" --out \"" + out.string() +
                                     "\" > /dev/null 2>&1";
      ran = ran && std::system(invocation.c_str()) == 0;
    }
  }
  REQUIRE(ran);

  // Byte-compare every artifact of the two runs.
  const auto digest = [](const fs::path& root) {
    std::map<std::string, std::pair<std::uintmax_t, std::size_t>> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
      if (!entry.is_regular_file()) continue;
      std::ifstream is(entry.path(), std::ios::binary);
      std::ostringstream buffer;
      buffer << is.rdbuf();
      const std::string content = buffer.str();
      files[fs::relative(entry.path(), root).string()] = {entry.file_size(),
                                                          std::hash<std::string>{}(content)};
    }
    return files;
  };
  const auto a = digest(base / "a");
  const auto b = digest(base / "b");
  const bool identical = !a.empty() && a == b;
  char buf[120];
  std::snprintf(buf, sizeof(buf), "%zu artifacts byte-identical across re-runs", a.size());
  report(9, buf, identical);
}

TEST_CASE("criterion 10: two-floor scene fuses one map per room with IoU >= 0.8") {
  const fs::path dir = scratchDir("twofloor");
  const PipelineConfig config = loadPipelineConfig(configPath("twofloor.toml").string());
  runSimulate(config, dir.string());
  runMap(config, dir.string());
  runFuse(config, dir.string());

  // One fused map per room instance, classes covering all five rooms.
  std::vector<std::pair<std::string, std::string>> rooms;  // file, class
  {
    std::ifstream index(dir / "rooms" / "index.csv");
    std::string line;
    std::getline(index, line);
    while (std::getline(index, line)) {
      if (line.empty()) continue;
      std::stringstream ss(line);
      std::string file, instance, cls;
      std::getline(ss, file, ',');
      std::getline(ss, instance, ',');
      std::getline(ss, cls, ',');
      rooms.emplace_back(file, cls);
    }
  }
  std::vector<std::string> classes;
  for (const auto& [file, cls] : rooms) classes.push_back(cls);
  std::sort(classes.begin(), classes.end());
  const bool one_per_room =
      classes == std::vector<std::string>{"bedroom", "kitchen", "office", "stairwell", "study"};
  report(10, "five room instances fused, one map per room", one_per_room);

  bool iou_ok = one_per_room;
  double worst_iou = 1.0;
  for (const auto& [file, cls] : rooms) {
    const RoomSpec* room = nullptr;
    for (const auto& r : config.scene.rooms) {
      if (r.class_name == cls) room = &r;
    }
    REQUIRE(room != nullptr);
    const MultiLayerGrid grid = readGridFile((dir / "rooms" / file).string());
    const GridGeometry& geom = grid.geometry();
    const double res = geom.resolution();

    std::size_t known_in = 0, known_out = 0;
    for (int r = 0; r < geom.rows(); ++r) {
      for (int c = 0; c < geom.cols(); ++c) {
        if (!isKnown(grid.at("elevation", {r, c}))) continue;
        if (pointInPolygon(room->polygon, geom.cellToWorld({r, c}))) {
          ++known_in;
        } else {
          ++known_out;
        }
      }
    }
    // Rasterize the polygon at the same resolution for the union count.
    Eigen::Vector2d lo(1e18, 1e18), hi(-1e18, -1e18);
    for (const auto& v : room->polygon) {
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
    std::size_t polygon_cells = 0;
    for (double x = lo.x() + res / 2; x < hi.x(); x += res) {
      for (double y = lo.y() + res / 2; y < hi.y(); y += res) {
        polygon_cells += pointInPolygon(room->polygon, {x, y});
      }
    }
    const double iou =
        static_cast<double>(known_in) / static_cast<double>(polygon_cells + known_out);
    worst_iou = std::min(worst_iou, iou);
    iou_ok = iou_ok && iou >= 0.8;
  }
  char buf[120];
  std::snprintf(buf, sizeof(buf), "coverage IoU vs room polygons >= 0.8 (worst %.3f)", worst_iou);
  report(10, buf, iou_ok);
}
