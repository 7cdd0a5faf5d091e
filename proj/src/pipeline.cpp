#include "exomap/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "exomap/classification.hpp"
#include "exomap/cloud.hpp"
#include "exomap/errors.hpp"
#include "exomap/fusion.hpp"
#include "exomap/graph_io.hpp"
#include "exomap/graph_optimizer.hpp"
#include "exomap/grid_io.hpp"
#include "exomap/mesh.hpp"
#include "exomap/recon.hpp"
#include "exomap/rng.hpp"
#include "exomap/rpe.hpp"
#include "exomap/toml.hpp"

namespace exomap {

namespace fs = std::filesystem;

namespace {

Eigen::Vector2d vec2(const TomlValue& v) {
  const auto& arr = v.asArray();
  if (arr.size() != 2) throw ConfigError("expected a 2-element array");
  return {arr[0].asNumber(), arr[1].asNumber()};
}

std::vector<Eigen::Vector2d> vec2List(const TomlValue& v) {
  std::vector<Eigen::Vector2d> out;
  for (const auto& e : v.asArray()) out.push_back(vec2(e));
  return out;
}

void ensureDir(const fs::path& dir) { fs::create_directories(dir); }

struct IndexedFile {
  double stamp;
  std::string file;
};

void writeIndexCsv(const fs::path& path, const std::vector<IndexedFile>& rows) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot write index: " + path.string());
  os << "stamp,file\n";
  char buf[64];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%.6f,", row.stamp);
    os << buf << row.file << "\n";
  }
}

std::vector<IndexedFile> readIndexCsv(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw DataError("missing index file: " + path.string());
  std::vector<IndexedFile> rows;
  std::string line;
  std::getline(is, line);  // header
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) throw DataError("malformed index row in " + path.string());
    rows.push_back({std::stod(line.substr(0, comma)), line.substr(comma + 1)});
  }
  return rows;
}

// Keyframe emission stamps: polyline-distance crossings of `spacing`.
std::vector<std::size_t> spacedSampleIndices(const Trajectory& traj, double spacing) {
  std::vector<std::size_t> indices;
  double traveled = 0.0;
  double next = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (i > 0) {
      traveled +=
          (traj.entries[i].pose.translation() - traj.entries[i - 1].pose.translation()).norm();
    }
    if (traveled >= next) {
      indices.push_back(i);
      next = traveled + spacing;
    }
  }
  return indices;
}

void simulateSession(const PipelineConfig& config, const Scene& scene,
                     const std::vector<Landmark>& landmarks,
                     const std::vector<Eigen::Vector2d>& waypoints, const fs::path& out,
                     const std::string& prefix, double keyframe_spacing, bool with_clouds,
                     std::uint64_t session_stream, const DriftConfig& session_drift) {
  const Trajectory gt = generateGaitTrajectory(config.gait, waypoints, config.dt, &scene);
  writeTumTrajectory((out / (prefix + "gt_trajectory.tum")).string(), gt);

  DriftConfig drift = session_drift;
  drift.seed = Rng::deriveSeed(config.seed, session_stream + 1);
  const Trajectory odom = corruptOdometry(gt, drift);
  writeTumTrajectory((out / (prefix + "odometry.tum")).string(), odom);

  char name[64];
  if (with_clouds) {
    const fs::path cloud_dir = out / (prefix + "clouds");
    ensureDir(cloud_dir);
    std::vector<IndexedFile> index;
    for (std::size_t i = 0; i < gt.size(); ++i) {
      RenderConfig render = config.render;
      render.seed = Rng::deriveSeed(config.seed, session_stream + 100000 + i);
      PointCloud cloud = renderDepthCloud(scene, gt.entries[i].pose, config.camera, render);
      cloud.stamp = gt.entries[i].stamp;
      std::snprintf(name, sizeof(name), "cloud_%06zu.ply", i);
      writePlyCloud((cloud_dir / name).string(), cloud);
      index.push_back({gt.entries[i].stamp, std::string(prefix + "clouds/") + name});
    }
    writeIndexCsv(out / (prefix + "clouds_index.csv"), index);
  }

  const fs::path kf_dir = out / (prefix + "keyframes");
  ensureDir(kf_dir);
  std::vector<IndexedFile> kf_index;
  const auto kf_samples = spacedSampleIndices(gt, keyframe_spacing);
  for (std::size_t k = 0; k < kf_samples.size(); ++k) {
    const std::size_t i = kf_samples[k];
    KeyframeNoise noise = config.keyframe_noise;
    noise.seed = Rng::deriveSeed(config.seed, session_stream + 200000 + i);
    const Keyframe kf = synthKeyframe(scene, gt.entries[i].pose, config.camera, landmarks, noise,
                                      static_cast<int>(k));
    std::snprintf(name, sizeof(name), "kf_%05zu.exkf", k);
    writeKeyframeFile((kf_dir / name).string(), kf);
    kf_index.push_back({gt.entries[i].stamp, std::string(prefix + "keyframes/") + name});
  }
  writeIndexCsv(out / (prefix + "keyframes_index.csv"), kf_index);

  if (prefix.empty()) {
    LabelerConfig labeler = config.labeler;
    labeler.seed = Rng::deriveSeed(config.seed, session_stream + 3);
    const auto observations = labelRooms(gt, scene, labeler);
    writeRoomObservationsCsv((out / "labels.csv").string(), labelClasses(scene), observations);
  }
}

TraversabilityMap layerAsMap(const MultiLayerGrid& grid, const std::string& layer) {
  TraversabilityMap map(grid.geometry());
  map.values = grid.layer(layer).values;
  return map;
}

}  // namespace

PipelineConfig loadPipelineConfig(const std::string& path) {
  const TomlValue root = TomlValue::parseFile(path);
  PipelineConfig c;
  c.seed = static_cast<std::uint64_t>(root.numberOr("seed", 0.0));

  if (!root.contains("scene")) throw ConfigError(path + ": missing [scene] section");
  const TomlValue& scene = root.at("scene");
  if (scene.contains("rooms")) {
    for (const auto& r : scene.at("rooms").asArray()) {
      RoomSpec room;
      room.polygon = vec2List(r.at("polygon"));
      room.class_name = r.stringOr("class", "room");
      room.floor_z = r.numberOr("floor_z", 0.0);
      c.scene.rooms.push_back(std::move(room));
    }
  }
  if (scene.contains("walls")) {
    for (const auto& w : scene.at("walls").asArray()) {
      WallSpec wall;
      wall.p0 = vec2(w.at("p0"));
      wall.p1 = vec2(w.at("p1"));
      wall.height = w.numberOr("height", 2.0);
      wall.thickness = w.numberOr("thickness", 0.1);
      wall.base_z = w.numberOr("base_z", 0.0);
      c.scene.walls.push_back(wall);
    }
  }
  if (scene.contains("stairs")) {
    for (const auto& s : scene.at("stairs").asArray()) {
      StairSpec stair;
      stair.origin = vec2(s.at("origin"));
      stair.yaw = s.numberOr("yaw", 0.0);
      stair.riser = s.numberOr("riser", 0.1);
      stair.tread = s.numberOr("tread", 0.3);
      stair.steps = s.intOr("steps", 5);
      stair.width = s.numberOr("width", 1.2);
      stair.base_z = s.numberOr("base_z", 0.0);
      c.scene.stairs.push_back(stair);
    }
  }
  if (scene.contains("boxes")) {
    for (const auto& b : scene.at("boxes").asArray()) {
      BoxSpec box;
      box.center = vec2(b.at("center"));
      box.size = vec2(b.at("size"));
      box.height = b.numberOr("height", 0.5);
      box.base_z = b.numberOr("base_z", 0.0);
      c.scene.boxes.push_back(box);
    }
  }

  if (!root.contains("trajectory")) throw ConfigError(path + ": missing [trajectory] section");
  const TomlValue& traj = root.at("trajectory");
  c.waypoints = vec2List(traj.at("waypoints"));
  if (traj.contains("revisit_waypoints")) {
    c.revisit_waypoints = vec2List(traj.at("revisit_waypoints"));
  }
  c.dt = traj.numberOr("dt", 1.0 / 15.0);

  if (root.contains("gait")) {
    const TomlValue& g = root.at("gait");
    c.gait.forward_speed = g.numberOr("forward_speed", c.gait.forward_speed);
    c.gait.step_frequency = g.numberOr("step_frequency", c.gait.step_frequency);
    c.gait.pitch_amplitude = g.numberOr("pitch_amplitude", c.gait.pitch_amplitude);
    c.gait.bob_amplitude = g.numberOr("bob_amplitude", c.gait.bob_amplitude);
    c.gait.impulse_amplitude = g.numberOr("impulse_amplitude", c.gait.impulse_amplitude);
    c.gait.max_yaw_rate = g.numberOr("max_yaw_rate", c.gait.max_yaw_rate);
    c.gait.mount_offset =
        makeCameraMount(g.numberOr("camera_height", 0.8), g.numberOr("camera_pitch", 0.55));
  }
  if (root.contains("camera")) {
    const TomlValue& k = root.at("camera");
    c.camera.fx = k.numberOr("fx", c.camera.fx);
    c.camera.fy = k.numberOr("fy", c.camera.fy);
    c.camera.cx = k.numberOr("cx", c.camera.cx);
    c.camera.cy = k.numberOr("cy", c.camera.cy);
    c.camera.width = k.intOr("width", c.camera.width);
    c.camera.height = k.intOr("height", c.camera.height);
  }
  if (root.contains("render")) {
    const TomlValue& r = root.at("render");
    c.render.noise_sigma = r.numberOr("noise_sigma", c.render.noise_sigma);
    c.render.max_range = r.numberOr("max_range", c.render.max_range);
    c.render.pixel_stride = r.intOr("pixel_stride", c.render.pixel_stride);
  }
  if (root.contains("drift")) {
    const TomlValue& d = root.at("drift");
    c.drift.translation_drift_per_m = d.numberOr("translation_per_m", 0.04);
    c.drift.yaw_drift_per_m = d.numberOr("yaw_per_m", 0.0);
    c.drift.translation_noise_per_sqrt_m = d.numberOr("translation_noise", 0.0);
    c.drift.yaw_noise_per_sqrt_m = d.numberOr("yaw_noise", 0.0);
  }
  c.revisit_drift = c.drift;
  if (root.contains("revisit_drift")) {
    const TomlValue& d = root.at("revisit_drift");
    c.revisit_drift.translation_drift_per_m =
        d.numberOr("translation_per_m", c.drift.translation_drift_per_m);
    c.revisit_drift.yaw_drift_per_m = d.numberOr("yaw_per_m", c.drift.yaw_drift_per_m);
    c.revisit_drift.translation_noise_per_sqrt_m =
        d.numberOr("translation_noise", c.drift.translation_noise_per_sqrt_m);
    c.revisit_drift.yaw_noise_per_sqrt_m =
        d.numberOr("yaw_noise", c.drift.yaw_noise_per_sqrt_m);
  }
  if (root.contains("mapping")) {
    const TomlValue& m = root.at("mapping");
    c.mapping.window_side = m.numberOr("window", c.mapping.window_side);
    c.mapping.resolution = m.numberOr("resolution", c.mapping.resolution);
    c.mapping.sensor_sigma_at_1m = m.numberOr("sensor_sigma_at_1m", c.mapping.sensor_sigma_at_1m);
    c.mapping.mahalanobis_gate = m.numberOr("gate", c.mapping.mahalanobis_gate);
    c.mapping.min_height = m.numberOr("min_height", c.mapping.min_height);
    c.mapping.max_height = m.numberOr("max_height", c.mapping.max_height);
    c.submap_side = m.numberOr("submap_side", c.submap_side);
    c.spacing.translation = m.numberOr("node_spacing", c.spacing.translation);
    c.spacing.rotation = m.numberOr("node_rotation_deg", 30.0) * M_PI / 180.0;
  }
  if (root.contains("labels")) {
    const TomlValue& l = root.at("labels");
    c.labeler.epsilon = l.numberOr("epsilon", c.labeler.epsilon);
    c.labeler.mislabel_rate = l.numberOr("mislabel_rate", c.labeler.mislabel_rate);
  }
  if (root.contains("landmarks")) {
    const TomlValue& l = root.at("landmarks");
    c.landmark_count = l.intOr("count", c.landmark_count);
    c.keyframe_spacing = l.numberOr("keyframe_spacing", c.keyframe_spacing);
    c.keyframe_noise.pixel_sigma = l.numberOr("pixel_sigma", c.keyframe_noise.pixel_sigma);
    c.keyframe_noise.bit_flip_rate = l.numberOr("bit_flip_rate", c.keyframe_noise.bit_flip_rate);
  }
  if (root.contains("traversability")) {
    const TomlValue& t = root.at("traversability");
    c.traversability.stride_radius = t.numberOr("stride_radius", 0.20);
    c.traversability.step_height = t.numberOr("step_height", 0.20);
    c.traversability.min_support = t.intOr("min_support", 3);
    c.traversability.treat_unknown_as_untraversable = t.boolOr("unknown_untraversable", false);
    if (t.contains("thresholds")) c.thresholds = t.numbers("thresholds");
  }
  if (c.thresholds.empty()) {
    for (int i = 1; i <= 19; ++i) c.thresholds.push_back(0.05 * i);
  }
  if (root.contains("baseline")) {
    const TomlValue& b = root.at("baseline");
    c.baseline.fit_radius = b.numberOr("fit_radius", 0.10);
    c.baseline.max_slope = b.numberOr("max_slope_deg", 45.0) * M_PI / 180.0;
  }
  if (root.contains("ransac")) {
    const TomlValue& r = root.at("ransac");
    c.verify.pnp.iterations = r.intOr("iterations", 500);
    c.verify.pnp.reproj_threshold = r.numberOr("reproj_threshold", 3.0);
    c.verify.pnp.min_inliers = r.intOr("min_inliers", 15);
    c.verify.min_correspondences = r.intOr("min_correspondences", 10);
    c.verify.max_mean_reproj = r.numberOr("max_mean_reproj", 2.0);
  }
  if (root.contains("localization")) {
    const TomlValue& l = root.at("localization");
    c.retrieval_k = l.intOr("retrieval_k", 3);
    c.fix_spacing = l.numberOr("fix_spacing", 0.8);
    c.loop_closures = l.boolOr("loop_closures", true);
    c.loop_min_gap = l.intOr("loop_min_gap", 8);
    c.loop_info_per_inlier = l.numberOr("loop_info_per_inlier", 8.0);
  }
  if (root.contains("evaluation")) {
    const TomlValue& e = root.at("evaluation");
    if (e.contains("rpe_distances")) c.rpe_distances = e.numbers("rpe_distances");
    c.recon_density = e.numberOr("recon_density", 10000.0);
    c.steep_filter_angle = e.numberOr("steep_filter_deg", 80.0) * M_PI / 180.0;
    if (e.contains("recon_crop")) {
      const auto crop = e.numbers("recon_crop");
      if (crop.size() != 4) throw ConfigError("recon_crop needs [x0, y0, x1, y1]");
      c.recon_crop = std::array<double, 4>{crop[0], crop[1], crop[2], crop[3]};
    }
  }
  return c;
}

void runSimulate(const PipelineConfig& config, const std::string& out_dir) {
  const fs::path out(out_dir);
  ensureDir(out);
  const Scene scene = buildScene(config.scene);
  writePlyMesh((out / "scene_mesh.ply").string(), scene.mesh());

  const auto landmarks =
      generateLandmarks(scene, config.landmark_count, Rng::deriveSeed(config.seed, 2));
  writeLandmarkFile((out / "landmarks.bin").string(), landmarks);

  simulateSession(config, scene, landmarks, config.waypoints, out, "", config.keyframe_spacing,
                  /*with_clouds=*/true, /*session_stream=*/0, config.drift);
  if (!config.revisit_waypoints.empty()) {
    simulateSession(config, scene, landmarks, config.revisit_waypoints, out, "revisit_",
                    config.fix_spacing, /*with_clouds=*/false, /*session_stream=*/5000000,
                    config.revisit_drift);
  }
}

void runMap(const PipelineConfig& config, const std::string& out_dir) {
  const fs::path out(out_dir);
  const Trajectory odom = readTumTrajectory((out / "odometry.tum").string());
  const auto cloud_index = readIndexCsv(out / "clouds_index.csv");
  const auto kf_index = readIndexCsv(out / "keyframes_index.csv");
  const auto [classes, observations] = readRoomObservationsCsv((out / "labels.csv").string());
  if (odom.empty() || cloud_index.empty()) throw DataError("map: empty simulation inputs");

  PoseGraph graph(config.spacing, classes);
  // Odometry factor information from the configured drift magnitudes.
  const double sigma_t = std::max(
      config.drift.translation_drift_per_m * config.spacing.translation +
          config.drift.translation_noise_per_sqrt_m * std::sqrt(config.spacing.translation),
      1e-3);
  const double sigma_r = std::max(config.drift.yaw_drift_per_m * config.spacing.translation +
                                      config.drift.yaw_noise_per_sqrt_m *
                                          std::sqrt(config.spacing.translation),
                                  1e-3);
  Matrix6d odom_info = Matrix6d::Identity();
  odom_info.topLeftCorner<3, 3>() /= sigma_t * sigma_t;
  odom_info.bottomRightCorner<3, 3>() /= sigma_r * sigma_r;
  graph.setOdometryInformation(odom_info);

  RollingElevationMap map(config.mapping, odom[0].pose.translation().head<2>());
  std::vector<Keyframe> node_keyframes;  // retrieval pool, node_id set

  std::size_t kf_cursor = 0;
  for (const auto& row : cloud_index) {
    const std::size_t oi = odom.nearestIndex(row.stamp);
    if (std::abs(odom[oi].stamp - row.stamp) > config.dt * 0.25) {
      throw DataError("map: cloud stamp has no odometry pose");
    }
    const SE3& pose = odom[oi].pose;
    map.recenter(pose.translation().head<2>());
    PointCloud cloud = readPlyCloud((out / row.file).string());
    cloud.stamp = row.stamp;
    if (config.render.noise_sigma > 0.0) {
      // PLY files carry no per-point sigma; restore the render noise model.
      cloud.sigmas.resize(cloud.size());
      for (std::size_t i = 0; i < cloud.size(); ++i) {
        const double range = cloud.points[i].norm();
        cloud.sigmas[i] = std::max(config.render.noise_sigma * range * range, 1e-6);
      }
    }
    map.integrateCloud(cloud, SensorPose{pose, row.stamp});

    // Node attempts happen at keyframe stamps so nodes own their keyframes.
    while (kf_cursor < kf_index.size() &&
           kf_index[kf_cursor].stamp <= row.stamp + config.dt * 0.25) {
      const auto& kf_row = kf_index[kf_cursor];
      ++kf_cursor;
      if (std::abs(kf_row.stamp - row.stamp) > config.dt * 0.25) continue;

      const auto node_id = graph.addNodeIfSpaced(pose, row.stamp);
      if (!node_id) continue;
      GraphNode& node = graph.node(*node_id);

      auto submap = std::make_shared<Submap>(map.snapshotSubmap(pose, config.submap_side, *node_id));
      node.submap = std::move(submap);

      auto kf = std::make_shared<Keyframe>(readKeyframeFile((out / kf_row.file).string()));
      kf->node_id = *node_id;
      node.keyframe = kf;

      // Room label from the nearest simulated observation.
      std::size_t best = 0;
      double best_dt = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < observations.size(); ++i) {
        const double d = std::abs(observations[i].stamp - row.stamp);
        if (d < best_dt) {
          best_dt = d;
          best = i;
        }
      }
      graph.assignRoomLabel(*node_id, observations[best].distribution);

      // Loop closure against older nodes through the localization machinery.
      if (config.loop_closures && static_cast<int>(node_keyframes.size()) > config.loop_min_gap) {
        std::unordered_set<int> allowed;
        for (const auto& old : node_keyframes) {
          if (old.node_id <= *node_id - config.loop_min_gap) allowed.insert(old.node_id);
        }
        if (!allowed.empty()) {
          const auto candidates = retrieveCandidates(*kf, node_keyframes, config.retrieval_k,
                                                     config.verify.matching, allowed);
          for (const auto& candidate : candidates) {
            const Keyframe& cand_kf = node_keyframes[static_cast<std::size_t>(candidate.node_id)];
            const auto fix = verifyAndFix(*kf, cand_kf, graph.node(candidate.node_id).pose,
                                          config.verify, row.stamp);
            if (!fix) continue;
            const SE3 rel = graph.node(candidate.node_id).pose.inverse() * fix->pose;
            graph.addLoopClosure(candidate.node_id, *node_id, rel,
                                 Matrix6d::Identity() * config.loop_info_per_inlier *
                                     fix->inlier_count);
            break;
          }
        }
      }
      node_keyframes.push_back(*kf);
    }
  }

  if (graph.nodes().empty()) throw DataError("map: no nodes created");
  optimize(graph);
  saveGraph((out / "graph.jsonl").string(), graph, "payloads");
}

void runFuse(const PipelineConfig& config, const std::string& out_dir) {
  (void)config;
  const fs::path out(out_dir);
  const PoseGraph graph = loadGraph((out / "graph.jsonl").string());
  const FusionReport report = fuseAllRooms(graph);

  const fs::path rooms = out / "rooms";
  ensureDir(rooms);
  std::ofstream index(rooms / "index.csv");
  index << "file,instance,class\n";
  char name[64];
  for (const auto& room : report.rooms) {
    std::snprintf(name, sizeof(name), "room_%02d.exgm", room.instance_id);
    writeGridFile((rooms / name).string(), room.grid);
    nlohmann::json sidecar;
    sidecar["instance_id"] = room.instance_id;
    sidecar["class"] = room.class_name;
    sidecar["node_ids"] = room.node_ids;
    std::ofstream side((rooms / name).string() + ".json");
    side << sidecar.dump() << "\n";
    index << name << "," << room.instance_id << "," << room.class_name << "\n";
  }
  for (const auto& [instance, reason] : report.skipped) {
    std::fprintf(stderr, "fuse: skipped room instance %d: %s\n", instance, reason.c_str());
  }
}

void runTraverse(const PipelineConfig& config, const std::string& out_dir) {
  const fs::path rooms = fs::path(out_dir) / "rooms";
  const std::ifstream check(rooms / "index.csv");
  if (!check) throw DataError("traverse: no fused rooms found (run fuse first)");

  std::ifstream index(rooms / "index.csv");
  std::string line;
  std::getline(index, line);  // header
  std::ofstream summary(fs::path(out_dir) / "traverse_summary.csv");
  summary << "room,cells_scored,mean_score,mean_score_normals\n";
  while (std::getline(index, line)) {
    if (line.empty()) continue;
    const std::string file = line.substr(0, line.find(','));
    MultiLayerGrid grid = readGridFile((rooms / file).string());
    const TraversabilityMap scores = scoreMap(grid, config.traversability);
    const TraversabilityMap normals = normalsBaseline(grid, config.baseline);
    writeScoreLayer(grid, scores, "traversability");
    writeScoreLayer(grid, normals, "trav_normals");
    writeGridFile((rooms / file).string(), grid);

    double sum = 0.0, sum_n = 0.0;
    int known = 0, known_n = 0;
    for (double v : scores.values) {
      if (isKnown(v)) {
        sum += v;
        ++known;
      }
    }
    for (double v : normals.values) {
      if (isKnown(v)) {
        sum_n += v;
        ++known_n;
      }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s,%d,%.6g,%.6g\n", file.c_str(), known,
                  known > 0 ? sum / known : 0.0, known_n > 0 ? sum_n / known_n : 0.0);
    summary << buf;
  }
  summary.close();

  // Per-threshold classification sweep against the analytic scene labels.
  runEvalTrav(config, out_dir);
}

void runLocalize(const PipelineConfig& config, const std::string& out_dir) {
  const fs::path out(out_dir);
  const PoseGraph graph = loadGraph((out / "graph.jsonl").string());
  const Trajectory odom = readTumTrajectory((out / "revisit_odometry.tum").string());
  const auto query_index = readIndexCsv(out / "revisit_keyframes_index.csv");
  if (odom.empty()) throw DataError("localize: empty revisit odometry");

  std::vector<Keyframe> map_keyframes;
  for (const auto& node : graph.nodes()) {
    if (node.keyframe) map_keyframes.push_back(*node.keyframe);
  }
  if (map_keyframes.empty()) throw DataError("localize: the graph has no keyframes");

  MapCorrection correction;
  std::vector<LocalizationFix> fixes;
  Trajectory localized;
  std::size_t query_cursor = 0;
  for (const auto& entry : odom.entries) {
    while (query_cursor < query_index.size() &&
           query_index[query_cursor].stamp <= entry.stamp + 1e-9) {
      const auto& row = query_index[query_cursor];
      ++query_cursor;
      if (std::abs(row.stamp - entry.stamp) > config.dt * 0.25) continue;
      const Keyframe query = readKeyframeFile((out / row.file).string());
      std::vector<PlaceCandidate> candidates;
      try {
        candidates =
            retrieveCandidates(query, map_keyframes, config.retrieval_k, config.verify.matching);
      } catch (const InvalidArgumentError&) {
        continue;
      }
      for (const auto& candidate : candidates) {
        const Keyframe* cand_kf = nullptr;
        for (const auto& kf : map_keyframes) {
          if (kf.node_id == candidate.node_id) {
            cand_kf = &kf;
            break;
          }
        }
        if (!cand_kf) continue;
        const auto fix = verifyAndFix(query, *cand_kf, graph.node(candidate.node_id).pose,
                                      config.verify, row.stamp);
        if (!fix) continue;
        correction = updateCorrection(correction, *fix, entry.pose, entry.stamp);
        fixes.push_back(*fix);
        break;
      }
    }
    localized.append(entry.stamp, localizedPose(correction, entry.pose));
  }

  writeFixLogCsv((out / "fixes.csv").string(), fixes);
  writeTumTrajectory((out / "localized_trajectory.tum").string(), localized);
}

void runEvalRpe(const PipelineConfig& config, const std::string& out_dir) {
  const fs::path out(out_dir);
  std::ofstream os(out / "rpe.csv");
  if (!os) throw DataError("cannot write rpe.csv");
  os << "estimate,distance_m,translation_rmse_m,rotation_rmse_deg,pairs\n";
  char buf[200];

  const auto evalPair = [&](const std::string& est_file, const std::string& gt_file,
                            const std::string& label) {
    if (!fs::exists(out / est_file) || !fs::exists(out / gt_file)) return;
    const Trajectory est = readTumTrajectory((out / est_file).string());
    const Trajectory gt = readTumTrajectory((out / gt_file).string());
    for (double d : config.rpe_distances) {
      const RpeResult r = rpe(est, gt, d);
      std::snprintf(buf, sizeof(buf), "%s,%.6g,%.9g,%.9g,%zu\n", label.c_str(), d,
                    r.translation_rmse, r.rotation_rmse, r.pair_count);
      os << buf;
    }
  };
  evalPair("odometry.tum", "gt_trajectory.tum", "odometry");
  evalPair("revisit_odometry.tum", "revisit_gt_trajectory.tum", "revisit_odometry");
  evalPair("localized_trajectory.tum", "revisit_gt_trajectory.tum", "localized");
}

void runEvalRecon(const PipelineConfig& config, const std::string& out_dir) {
  const fs::path out(out_dir);
  const fs::path rooms = out / "rooms";
  std::ifstream index(rooms / "index.csv");
  if (!index) throw DataError("eval-recon: no fused rooms found (run fuse first)");

  const Scene scene = buildScene(config.scene);
  PointCloud gt_cloud =
      sampleMesh(scene.mesh(), 2.0 * config.recon_density, Rng::deriveSeed(config.seed, 7));
  if (config.recon_crop) {
    const auto& box = *config.recon_crop;
    PointCloud cropped;
    for (const auto& p : gt_cloud.points) {
      if (p.x() >= box[0] - 0.2 && p.x() <= box[2] + 0.2 && p.y() >= box[1] - 0.2 &&
          p.y() <= box[3] + 0.2) {
        cropped.points.push_back(p);
      }
    }
    gt_cloud = std::move(cropped);
  }

  // Evaluate the room map that owns the region: with a crop, the one with the
  // most known cells inside it; otherwise all rooms merge.
  TriMesh merged;
  std::string best_room = "all";
  std::size_t best_known = 0;
  MultiLayerGrid best_grid(GridGeometry(0.02, Eigen::Vector2d::Zero(), 1, 1), "map");
  std::string line;
  std::getline(index, line);
  while (std::getline(index, line)) {
    if (line.empty()) continue;
    const std::string file = line.substr(0, line.find(','));
    MultiLayerGrid grid = readGridFile((rooms / file).string());
    if (config.recon_crop) {
      const auto& box = *config.recon_crop;
      try {
        grid = grid.crop({box[0], box[1]}, {box[2], box[3]});
      } catch (const OutOfBoundsError&) {
        continue;  // room does not overlap the crop region
      }
      std::size_t known = 0;
      for (double v : grid.layer("elevation").values) known += isKnown(v);
      if (known > best_known) {
        best_known = known;
        best_grid = std::move(grid);
        best_room = file;
      }
    } else {
      TriMesh mesh;
      try {
        mesh = heightmapToMesh(grid);
      } catch (const InvalidArgumentError&) {
        continue;  // nothing known to mesh in this room
      }
      const int base = static_cast<int>(merged.vertices.size());
      merged.vertices.insert(merged.vertices.end(), mesh.vertices.begin(), mesh.vertices.end());
      for (auto tri : mesh.triangles) {
        merged.triangles.push_back({tri[0] + base, tri[1] + base, tri[2] + base});
      }
    }
  }
  if (config.recon_crop) {
    if (best_known == 0) throw DataError("eval-recon: no room covers the crop region");
    merged = heightmapToMesh(best_grid);
  }
  if (merged.triangles.empty()) throw DataError("eval-recon: no reconstructed surface to compare");

  const TriMesh filtered = filterSteepTriangles(merged, config.steep_filter_angle);
  writePlyMesh((out / "recon_mesh.ply").string(), filtered);
  const PointCloud sampled =
      sampleMesh(filtered, config.recon_density, Rng::deriveSeed(config.seed, 8));
  if (sampled.empty()) throw DataError("eval-recon: sampling produced no points");
  const ReconError error = pointToPointError(sampled, gt_cloud);
  writeReconCsv((out / "recon.csv").string(), best_room, error);
  std::fprintf(stdout, "recon: room=%s mean=%.3fcm max=%.3fcm p90=%.3fcm n=%zu\n",
               best_room.c_str(), error.mean_cm, error.max_cm, error.p90_cm, error.sample_count);
}

void runEvalTrav(const PipelineConfig& config, const std::string& out_dir) {
  const fs::path out(out_dir);
  const fs::path rooms = out / "rooms";
  std::ifstream index(rooms / "index.csv");
  if (!index) throw DataError("eval-trav: no fused rooms found (run traverse first)");

  const Scene scene = buildScene(config.scene);
  std::ofstream step_csv(out / "trav_step.csv");
  std::ofstream normals_csv(out / "trav_normals.csv");
  std::ofstream summary(out / "trav_summary.csv");
  step_csv << "room,threshold,precision,recall,f\n";
  normals_csv << "room,threshold,precision,recall,f\n";
  summary << "room,method,best_threshold,best_f,f_at_0p5\n";

  char buf[240];
  std::string line;
  std::getline(index, line);
  while (std::getline(index, line)) {
    if (line.empty()) continue;
    const std::string file = line.substr(0, line.find(','));
    const MultiLayerGrid grid = readGridFile((rooms / file).string());
    if (!grid.hasLayer("traversability")) {
      throw DataError("eval-trav: room lacks traversability layers (run traverse first)");
    }
    const TraversabilityMap labels =
        scene.traversabilityLabels(grid.geometry(), config.traversability);

    const auto evalMethod = [&](const std::string& layer, std::ofstream& csv,
                                const std::string& method) {
      const TraversabilityMap pred = layerAsMap(grid, layer);
      ClassificationReport report;
      try {
        report = evaluateClassification(pred, labels, config.thresholds);
      } catch (const InvalidArgumentError&) {
        return;  // degenerate room (e.g., all one class); skip
      }
      double f_at_half = 0.0;
      for (std::size_t i = 0; i < report.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%s,%.6g,%.9g,%.9g,%.9g\n", file.c_str(),
                      report.thresholds[i], report.precision[i], report.recall[i],
                      report.f_score[i]);
        csv << buf;
        if (std::abs(report.thresholds[i] - 0.5) < 1e-9) f_at_half = report.f_score[i];
      }
      std::snprintf(buf, sizeof(buf), "%s,%s,%.6g,%.9g,%.9g\n", file.c_str(), method.c_str(),
                    report.best_threshold, report.best_f, f_at_half);
      summary << buf;
    };
    evalMethod("traversability", step_csv, "step_height");
    evalMethod("trav_normals", normals_csv, "normals");
  }
}

}  // namespace exomap
