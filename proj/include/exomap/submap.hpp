#pragma once

#include "exomap/grid.hpp"
#include "exomap/se3.hpp"

namespace exomap {

/// Frozen local elevation crop tied to a pose-graph node. Heights stay in the
/// odom frame of the capture; fusion re-anchors them with the optimized node
/// pose.
struct Submap {
  MultiLayerGrid grid;  // elevation + variance layers, frame "odom"
  int capture_node = -1;
  SE3 capture_pose;

  Submap() : grid(GridGeometry(0.02, Eigen::Vector2d::Zero(), 1, 1), "odom") {}
  Submap(MultiLayerGrid g, int node, const SE3& pose)
      : grid(std::move(g)), capture_node(node), capture_pose(pose) {}
};

}  // namespace exomap
