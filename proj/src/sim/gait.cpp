#include "exomap/sim/gait.hpp"

#include <cmath>

#include "exomap/errors.hpp"
#include "exomap/rng.hpp"

namespace exomap {

namespace {

double wrapAngle(double a) {
  while (a > M_PI) a -= 2.0 * M_PI;
  while (a < -M_PI) a += 2.0 * M_PI;
  return a;
}

}  // namespace

GaitConfig::GaitConfig() : mount_offset(makeCameraMount(0.8, 0.55)) {}

SE3 makeCameraMount(double height, double pitch_down) {
  // Optical frame in the thigh frame: x_cam = -y_thigh, y_cam = -z_thigh,
  // z_cam = +x_thigh. Camera y points down, so tilting the view toward the
  // ground is a negative rotation about the camera x axis.
  Eigen::Matrix3d forward;
  forward.col(0) = Eigen::Vector3d(0, -1, 0);
  forward.col(1) = Eigen::Vector3d(0, 0, -1);
  forward.col(2) = Eigen::Vector3d(1, 0, 0);
  const Eigen::Matrix3d tilt =
      Eigen::AngleAxisd(-pitch_down, Eigen::Vector3d::UnitX()).toRotationMatrix();
  return SE3(Eigen::Quaterniond(forward * tilt), Eigen::Vector3d(0, 0, height));
}

Trajectory generateGaitTrajectory(const GaitConfig& config,
                                  const std::vector<Eigen::Vector2d>& waypoints, double dt,
                                  const Scene* terrain) {
  if (waypoints.size() < 2) throw InvalidArgumentError("gait needs at least two waypoints");
  if (dt <= 0.0 || config.forward_speed <= 0.0 || config.step_frequency <= 0.0) {
    throw InvalidArgumentError("gait dt, speed, and frequency must be positive");
  }

  // Arc-length table of the polyline.
  std::vector<double> cumulative(waypoints.size(), 0.0);
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    cumulative[i] = cumulative[i - 1] + (waypoints[i] - waypoints[i - 1]).norm();
  }
  const double total = cumulative.back();
  if (total <= 0.0) throw InvalidArgumentError("waypoint polyline has zero length");
  const double duration = total / config.forward_speed;
  const std::size_t samples = static_cast<std::size_t>(std::floor(duration / dt)) + 1;

  // Base positions and raw headings.
  std::vector<Eigen::Vector2d> positions(samples);
  std::vector<double> headings(samples);
  std::size_t seg = 1;
  for (std::size_t k = 0; k < samples; ++k) {
    const double s = std::min(config.forward_speed * (dt * static_cast<double>(k)), total);
    while (seg + 1 < waypoints.size() && cumulative[seg] < s) ++seg;
    const double seg_len = cumulative[seg] - cumulative[seg - 1];
    const double u = seg_len > 0.0 ? (s - cumulative[seg - 1]) / seg_len : 0.0;
    positions[k] = waypoints[seg - 1] + u * (waypoints[seg] - waypoints[seg - 1]);
    const Eigen::Vector2d dir = waypoints[seg] - waypoints[seg - 1];
    headings[k] = std::atan2(dir.y(), dir.x());
  }

  // Rate-limited yaw so corners stay within max_yaw_rate.
  std::vector<double> yaw(samples);
  yaw[0] = headings[0];
  for (std::size_t k = 1; k < samples; ++k) {
    const double delta = wrapAngle(headings[k] - yaw[k - 1]);
    const double cap = config.max_yaw_rate * dt;
    yaw[k] = yaw[k - 1] + std::clamp(delta, -cap, cap);
  }

  // Terrain-following ground height, box-smoothed over ~0.4 m of path. The
  // walking level tracks the highest standing surface within one step
  // clearance of the current level, so stacked floors stay separate and
  // staircases ramp through them.
  std::vector<double> ground(samples, 0.0);
  if (terrain != nullptr) {
    constexpr double kStepClearance = 0.35;
    std::vector<double> raw(samples);
    double level = 0.0;
    {
      const auto start = terrain->standingSurfacesAt(positions[0]);
      if (!start.empty()) level = start.front();
    }
    for (std::size_t k = 0; k < samples; ++k) {
      double next = -1e18;
      for (double h : terrain->standingSurfacesAt(positions[k])) {
        if (h <= level + kStepClearance) next = std::max(next, h);
      }
      if (next > -1e17) level = next;  // hold the level while off all surfaces
      raw[k] = level;
    }
    const int half =
        std::max(1, static_cast<int>(0.2 / std::max(config.forward_speed * dt, 1e-6)));
    for (std::size_t k = 0; k < samples; ++k) {
      double sum = 0.0;
      int n = 0;
      for (int j = -half; j <= half; ++j) {
        const std::ptrdiff_t idx = static_cast<std::ptrdiff_t>(k) + j;
        if (idx < 0 || idx >= static_cast<std::ptrdiff_t>(samples)) continue;
        sum += raw[static_cast<std::size_t>(idx)];
        ++n;
      }
      ground[k] = sum / n;
    }
  }

  // Displacement shape of a foot-strike accel spike of width sigma:
  // double-integrating a Gaussian pulse of amplitude A scales as A * sigma^2.
  const double strike_scale =
      config.impulse_amplitude * config.impulse_width * config.impulse_width;

  Trajectory traj;
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = dt * static_cast<double>(k);
    const double phase = 2.0 * M_PI * config.step_frequency * t;
    const double pitch = config.pitch_amplitude * std::sin(phase);
    double z = ground[k] + config.bob_amplitude * std::sin(phase);
    // Nearest strike time (one per step period).
    const double period = 1.0 / config.step_frequency;
    const double t_strike = std::round(t / period) * period;
    const double dt_strike = t - t_strike;
    z -= strike_scale *
         std::exp(-dt_strike * dt_strike / (2.0 * config.impulse_width * config.impulse_width));

    const Eigen::Quaterniond rot =
        Eigen::Quaterniond(Eigen::AngleAxisd(yaw[k], Eigen::Vector3d::UnitZ())) *
        Eigen::Quaterniond(Eigen::AngleAxisd(pitch, Eigen::Vector3d::UnitY()));
    const SE3 thigh(rot, Eigen::Vector3d(positions[k].x(), positions[k].y(), z));
    traj.append(t, thigh * config.mount_offset);
  }
  return traj;
}

Trajectory corruptOdometry(const Trajectory& gt, const DriftConfig& config) {
  const bool noiseless = config.translation_drift_per_m == 0.0 &&
                         config.yaw_drift_per_m == 0.0 &&
                         config.translation_noise_per_sqrt_m == 0.0 &&
                         config.yaw_noise_per_sqrt_m == 0.0;
  if (noiseless || gt.size() < 2) return gt;

  Rng rng(Rng::deriveSeed(config.seed, 0x0d0));
  Trajectory out;
  out.append(gt[0].stamp, gt[0].pose);
  SE3 pose = gt[0].pose;
  for (std::size_t i = 1; i < gt.size(); ++i) {
    const SE3 rel = gt[i - 1].pose.inverse() * gt[i].pose;
    const double dist = rel.translation().norm();
    const double sqrt_d = std::sqrt(dist);

    Eigen::Vector3d t = rel.translation() * (1.0 + config.translation_drift_per_m);
    for (int k = 0; k < 3; ++k) {
      t[k] += rng.gaussian(0.0, config.translation_noise_per_sqrt_m * sqrt_d);
    }
    const double dyaw = config.yaw_drift_per_m * dist +
                        rng.gaussian(0.0, config.yaw_noise_per_sqrt_m * sqrt_d);
    // Heading error turns about the world vertical, expressed in the local
    // frame (camera optical frames do not have z up).
    const Eigen::Vector3d axis_local =
        gt[i - 1].pose.rotation().conjugate() * Eigen::Vector3d::UnitZ();
    const Eigen::Quaterniond q_err(Eigen::AngleAxisd(dyaw, axis_local));
    const SE3 corrupted(q_err * rel.rotation(), q_err * t);
    pose = pose * corrupted;
    out.append(gt[i].stamp, pose);
  }
  return out;
}

}  // namespace exomap
