#pragma once

#include <functional>

#include "exomap/sim/scene.hpp"
#include "exomap/trajectory.hpp"

namespace exomap {

struct GaitConfig {
  double forward_speed = 0.5;      // m/s along the waypoint polyline
  double step_frequency = 1.5;     // Hz
  double pitch_amplitude = 0.08;   // rad, thigh pitch oscillation
  double bob_amplitude = 0.02;     // m, vertical bob
  double impulse_amplitude = 40.0; // m/s^2, foot-strike accel spike magnitude
  double impulse_width = 0.02;     // s, spike support
  double max_yaw_rate = 1.5;       // rad/s, corner smoothing limit
  SE3 mount_offset;                // camera from thigh

  GaitConfig();
};

/// Camera axes: +z forward (optical), +x right, +y down. Thigh axes: +x
/// forward, +y left, +z up. `pitch_down` tilts the view toward the ground.
SE3 makeCameraMount(double height, double pitch_down);

/// Ground-truth camera trajectory along a 2D waypoint polyline.
///
/// The thigh follows the polyline at constant speed with rate-limited yaw,
/// rides the (smoothed) terrain surface when a scene is given, and composes
/// periodic pitch/bob plus foot-strike displacement spikes at the step
/// frequency. Deterministic; purely a function of its arguments.
Trajectory generateGaitTrajectory(const GaitConfig& config,
                                  const std::vector<Eigen::Vector2d>& waypoints, double dt,
                                  const Scene* terrain = nullptr);

struct DriftConfig {
  double translation_drift_per_m = 0.04;  // multiplicative scale error
  double yaw_drift_per_m = 0.0;           // rad per meter traveled
  double translation_noise_per_sqrt_m = 0.0;
  double yaw_noise_per_sqrt_m = 0.0;
  std::uint64_t seed = 0;
};

/// Integrates the ground-truth relative motions with scale and yaw-rate
/// errors plus seeded white noise; drift grows with path length. An all-zero
/// config returns the input unchanged.
Trajectory corruptOdometry(const Trajectory& gt, const DriftConfig& config);

}  // namespace exomap
