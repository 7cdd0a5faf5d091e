#pragma once

#include "exomap/cloud.hpp"
#include "exomap/grid.hpp"
#include "exomap/se3.hpp"
#include "exomap/submap.hpp"

namespace exomap {

struct RollingMapConfig {
  double window_side = 6.0;        // meters, square window
  double resolution = 0.02;        // meters per cell
  double sensor_sigma_at_1m = 0.01;  // measurement std at 1 m range
  double mahalanobis_gate = 3.0;   // outlier gate in cell-sigma units
  double min_height = -10.0;       // odom-frame z clip
  double max_height = 10.0;
};

struct SensorPose {
  SE3 pose;  // sensor in odom frame
  double stamp = 0.0;
};

/// Robot-centric rolling 2.5D elevation map.
///
/// Maintains elevation/variance/sample_count/last_update layers over a square
/// window that translates with the sensor by whole cells. Height measurements
/// fuse per cell with a 1D Kalman update after a Mahalanobis outlier gate.
/// Single writer; snapshots copy the current state.
class RollingElevationMap {
 public:
  explicit RollingElevationMap(const RollingMapConfig& config,
                               const Eigen::Vector2d& center = Eigen::Vector2d::Zero());

  const RollingMapConfig& config() const { return config_; }
  const MultiLayerGrid& grid() const { return grid_; }
  Eigen::Vector2d windowCenter() const;

  /// Integrates a point cloud given in the sensor frame. Points outside the
  /// window or height clip are discarded. Per-point sigma overrides the
  /// range-scaled sensor model when present. Empty clouds are a no-op.
  void integrateCloud(const PointCloud& cloud, const SensorPose& pose);

  /// Translates the window by whole cells so its center lands within one cell
  /// of new_center. Retained cells keep their values; entering cells are
  /// unknown.
  void recenter(const Eigen::Vector2d& new_center);

  /// Freezes a side x side crop centered at the node's 2D position.
  /// Throws OutOfBoundsError if the crop does not fit the current window.
  Submap snapshotSubmap(const SE3& node_pose, double side, int node_id = -1) const;

 private:
  RollingMapConfig config_;
  MultiLayerGrid grid_;
};

}  // namespace exomap
