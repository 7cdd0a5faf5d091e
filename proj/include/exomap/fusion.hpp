#pragma once

#include <string>
#include <vector>

#include "exomap/pose_graph.hpp"
#include "exomap/submap.hpp"

namespace exomap {

/// Fused terrain map of one room instance, in the map frame. Layers:
/// elevation, support_count, and (once scored) traversability.
struct RoomTerrainMap {
  int instance_id = -1;
  std::string class_name;
  std::vector<int> node_ids;
  MultiLayerGrid grid;

  RoomTerrainMap() : grid(GridGeometry(0.02, Eigen::Vector2d::Zero(), 1, 1), "map") {}
};

/// Re-anchors a submap with the optimized pose of its capture node.
///
/// Each known cell becomes a 3D point (x, y, h), moves through the correction
/// T = optimized_pose * capture_pose^-1, and scatters onto a map-frame grid of
/// the same resolution. When two source cells land in one target cell, the one
/// whose transformed center lies nearest the target cell center wins.
MultiLayerGrid transformSubmap(const Submap& submap, const SE3& optimized_node_pose);

/// Median fusion of map-frame elevation grids over their union bounding box.
/// Per cell, the fused height is the median of all known contributor heights;
/// an even count takes the mean of the two middle values. support_count holds
/// the contributor count.
RoomTerrainMap fuseRoom(const std::vector<MultiLayerGrid>& submaps);

struct FusionReport {
  std::vector<RoomTerrainMap> rooms;
  std::vector<std::pair<int, std::string>> skipped;  // instance id, reason
};

/// Runs transformSubmap + fuseRoom per room instance of an optimized graph.
/// Instances without submaps are skipped with a warning entry.
FusionReport fuseAllRooms(const PoseGraph& graph);

}  // namespace exomap
