#include "exomap/elevation.hpp"

#include <cmath>

namespace exomap {

namespace {

// Window spans an integer cell count; the origin snaps to the resolution
// lattice so co-registered submaps land on identical cell centers.
GridGeometry makeWindowGeometry(const RollingMapConfig& config, const Eigen::Vector2d& center) {
  const int cells = std::max(1, static_cast<int>(std::llround(config.window_side / config.resolution)));
  const double half = 0.5 * (cells - 1) * config.resolution;
  Eigen::Vector2d origin = center - Eigen::Vector2d(half, half);
  origin.x() = std::round(origin.x() / config.resolution) * config.resolution;
  origin.y() = std::round(origin.y() / config.resolution) * config.resolution;
  return GridGeometry(config.resolution, origin, cells, cells);
}

}  // namespace

RollingElevationMap::RollingElevationMap(const RollingMapConfig& config,
                                         const Eigen::Vector2d& center)
    : config_(config), grid_(makeWindowGeometry(config, center), "odom") {
  if (config.window_side <= 0.0 || config.resolution <= 0.0 || config.mahalanobis_gate <= 0.0) {
    throw InvalidArgumentError("rolling map config fields must be positive");
  }
  grid_.addLayer("variance");
  grid_.addLayer("sample_count");
  grid_.addLayer("last_update");
}

Eigen::Vector2d RollingElevationMap::windowCenter() const {
  const GridGeometry& g = grid_.geometry();
  return g.origin() +
         0.5 * g.resolution() * Eigen::Vector2d(g.cols() - 1, g.rows() - 1);
}

void RollingElevationMap::integrateCloud(const PointCloud& cloud, const SensorPose& pose) {
  if (!pose.pose.translation().allFinite() || !pose.pose.rotation().coeffs().allFinite()) {
    throw InvalidArgumentError("malformed sensor pose");
  }
  if (cloud.empty()) return;
  if (!cloud.sigmas.empty() && cloud.sigmas.size() != cloud.points.size()) {
    throw InvalidArgumentError("per-point sigma count does not match point count");
  }

  Layer& elevation = grid_.layer("elevation");
  Layer& variance = grid_.layer("variance");
  Layer& count = grid_.layer("sample_count");
  Layer& updated = grid_.layer("last_update");
  const GridGeometry& g = grid_.geometry();

  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const Eigen::Vector3d& p_sensor = cloud.points[i];
    if (!p_sensor.allFinite()) throw InvalidArgumentError("non-finite point in cloud");
    const Eigen::Vector3d p_odom = pose.pose * p_sensor;
    if (p_odom.z() < config_.min_height || p_odom.z() > config_.max_height) continue;
    if (!g.isInside(p_odom.head<2>())) continue;

    double sigma;
    if (!cloud.sigmas.empty()) {
      sigma = cloud.sigmas[i];
      if (!(sigma > 0.0)) throw InvalidArgumentError("per-point sigma must be > 0");
    } else {
      sigma = p_sensor.norm() * config_.sensor_sigma_at_1m;
    }
    const double meas_var = std::max(sigma * sigma, 1e-12);

    const std::size_t idx = g.linearIndex(g.worldToCell(p_odom.head<2>()));
    const double z = p_odom.z();
    if (count.values[idx] <= 0.0 || !isKnown(elevation.values[idx])) {
      elevation.values[idx] = z;
      variance.values[idx] = meas_var;
      count.values[idx] = 1.0;
      updated.values[idx] = cloud.stamp;
      continue;
    }

    const double innovation = z - elevation.values[idx];
    const double mahalanobis = std::abs(innovation) / std::sqrt(variance.values[idx]);
    if (mahalanobis > config_.mahalanobis_gate) continue;

    const double gain = variance.values[idx] / (variance.values[idx] + meas_var);
    elevation.values[idx] += gain * innovation;
    variance.values[idx] *= (1.0 - gain);
    count.values[idx] += 1.0;
    updated.values[idx] = cloud.stamp;
  }
}

void RollingElevationMap::recenter(const Eigen::Vector2d& new_center) {
  const GridGeometry& g = grid_.geometry();
  const Eigen::Vector2d delta = new_center - windowCenter();
  const int shift_cols = static_cast<int>(std::llround(delta.x() / g.resolution()));
  const int shift_rows = static_cast<int>(std::llround(delta.y() / g.resolution()));
  if (shift_cols == 0 && shift_rows == 0) return;

  GridGeometry shifted(g.resolution(),
                       g.origin() + g.resolution() * Eigen::Vector2d(shift_cols, shift_rows),
                       g.rows(), g.cols());
  MultiLayerGrid moved(shifted, grid_.frame());
  for (const auto& name : grid_.layerNames()) {
    const Layer& src = grid_.layer(name);
    Layer& dst = moved.addLayer(name);
    for (int r = 0; r < g.rows(); ++r) {
      const int src_r = r + shift_rows;
      if (src_r < 0 || src_r >= g.rows()) continue;
      for (int c = 0; c < g.cols(); ++c) {
        const int src_c = c + shift_cols;
        if (src_c < 0 || src_c >= g.cols()) continue;
        dst.values[shifted.linearIndex({r, c})] = src.values[g.linearIndex({src_r, src_c})];
      }
    }
  }
  grid_ = std::move(moved);
}

Submap RollingElevationMap::snapshotSubmap(const SE3& node_pose, double side, int node_id) const {
  const Eigen::Vector2d center = node_pose.translation().head<2>();
  const GridGeometry& g = grid_.geometry();
  if (!g.isInside(center)) throw OutOfBoundsError("node pose outside rolling window");

  const Eigen::Vector2d min_corner = center - 0.5 * Eigen::Vector2d(side, side);
  const Eigen::Vector2d max_corner = center + 0.5 * Eigen::Vector2d(side, side);
  const Eigen::Vector2d grid_min = g.origin();
  const Eigen::Vector2d grid_max =
      g.origin() + g.resolution() * Eigen::Vector2d(g.cols() - 1, g.rows() - 1);
  if (min_corner.x() < grid_min.x() - 0.5 * g.resolution() ||
      min_corner.y() < grid_min.y() - 0.5 * g.resolution() ||
      max_corner.x() > grid_max.x() + 0.5 * g.resolution() ||
      max_corner.y() > grid_max.y() + 0.5 * g.resolution()) {
    throw OutOfBoundsError("submap crop exceeds rolling window");
  }

  const MultiLayerGrid cropped = grid_.crop(min_corner, max_corner);
  MultiLayerGrid out(cropped.geometry(), "odom");
  out.layer("elevation").values = cropped.layer("elevation").values;
  out.addLayer("variance").values = cropped.layer("variance").values;
  return Submap(std::move(out), node_id, node_pose);
}

}  // namespace exomap
