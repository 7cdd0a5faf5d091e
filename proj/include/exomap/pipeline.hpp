#pragma once

#include <array>
#include <cmath>
#include <optional>

#include "exomap/elevation.hpp"
#include "exomap/localizer.hpp"
#include "exomap/pose_graph.hpp"
#include "exomap/sim/gait.hpp"
#include "exomap/sim/labels.hpp"
#include "exomap/sim/render.hpp"
#include "exomap/traversability.hpp"

namespace exomap {

/// Everything a pipeline run needs, parsed from one TOML file. Command
/// outputs land in a caller-chosen directory with a fixed layout (see the
/// run* functions).
struct PipelineConfig {
  std::uint64_t seed = 0;

  SceneSpec scene;
  std::vector<Eigen::Vector2d> waypoints;
  std::vector<Eigen::Vector2d> revisit_waypoints;  // empty: no revisit session
  double dt = 1.0 / 15.0;

  GaitConfig gait;
  CameraIntrinsics camera;
  RenderConfig render;
  DriftConfig drift;          // mapping session odometry corruption
  DriftConfig revisit_drift;  // revisit session; defaults to `drift`

  RollingMapConfig mapping;
  double submap_side = 3.0;
  SpacingPolicy spacing;

  LabelerConfig labeler;

  int landmark_count = 3000;
  double keyframe_spacing = 1.0;
  KeyframeNoise keyframe_noise;

  TraversabilityParams traversability;
  NormalsBaselineParams baseline;
  std::vector<double> thresholds;  // classification sweep

  VerifyConfig verify;
  int retrieval_k = 3;
  double fix_spacing = 0.8;
  bool loop_closures = true;
  int loop_min_gap = 8;
  double loop_info_per_inlier = 8.0;

  std::vector<double> rpe_distances{1.0, 5.0};
  double recon_density = 10000.0;
  double steep_filter_angle = 80.0 * M_PI / 180.0;
  std::optional<std::array<double, 4>> recon_crop;  // x0 y0 x1 y1
};

PipelineConfig loadPipelineConfig(const std::string& path);

// simulate: scene_mesh.ply, gt_trajectory.tum, odometry.tum, landmarks.bin,
//   clouds/*.ply + clouds/index.csv, keyframes/*.exkf + keyframes/index.csv,
//   labels.csv, and (with a revisit session) revisit_gt.tum,
//   revisit_odometry.tum, revisit_keyframes/.
void runSimulate(const PipelineConfig& config, const std::string& out_dir);

// map: rolling elevation mapping + spaced nodes + submaps + labels + loop
//   closures + optimization -> graph.jsonl (+ payloads/).
void runMap(const PipelineConfig& config, const std::string& out_dir);

// fuse: per-room median fusion -> rooms/room_XX.exgm + room_XX.json.
void runFuse(const PipelineConfig& config, const std::string& out_dir);

// traverse: score fused rooms (step-height + normals baseline layers),
//   rewrite rooms/*.exgm, emit traverse_summary.csv.
void runTraverse(const PipelineConfig& config, const std::string& out_dir);

// localize: revisit session against the mapped keyframes -> fixes.csv,
//   localized_trajectory.tum.
void runLocalize(const PipelineConfig& config, const std::string& out_dir);

// eval-rpe: odometry (and localized trajectory when present) vs ground truth
//   -> rpe.csv.
void runEvalRpe(const PipelineConfig& config, const std::string& out_dir);

// eval-recon: fused rooms -> mesh -> steep filter -> sampling -> point-to-
//   point error vs the analytic scene -> recon.csv (+ recon_mesh.ply).
void runEvalRecon(const PipelineConfig& config, const std::string& out_dir);

// eval-trav: classification sweep of both methods against analytic labels
//   -> trav_step.csv, trav_normals.csv, trav_summary.csv.
void runEvalTrav(const PipelineConfig& config, const std::string& out_dir);

}  // namespace exomap
