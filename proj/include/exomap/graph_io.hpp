#pragma once

#include <string>

#include "exomap/pose_graph.hpp"

namespace exomap {

// Pose-graph persistence: one JSON record per line. Node records carry
// {id, stamp, pose[7], room, submap_path, keyframe_path}; factor records
// carry {kind, from, to, rel_pose[7], info[21 upper-triangular]}.
// Pose arrays are [tx ty tz qx qy qz qw].
//
// Submap and keyframe payloads are written into `payload_dir` (relative to
// the graph file when not absolute); each submap grid gets a JSON sidecar
// holding its capture node and capture pose.
void saveGraph(const std::string& path, const PoseGraph& graph,
               const std::string& payload_dir = "payloads");

PoseGraph loadGraph(const std::string& path, bool load_payloads = true);

}  // namespace exomap
