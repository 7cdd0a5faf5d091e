#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "exomap/keyframe.hpp"
#include "exomap/se3.hpp"
#include "exomap/submap.hpp"

namespace exomap {

struct RoomLabel {
  std::string class_name;
  double score = 0.0;                  // score of the argmax class
  std::vector<double> distribution;    // per-class scores over the class list
};

struct Factor {
  enum class Kind { kOdometry, kLoopClosure };
  Kind kind = Kind::kOdometry;
  int from_id = -1;
  int to_id = -1;
  SE3 relative_pose;   // measured pose of `to` in `from`'s frame
  Matrix6d information = Matrix6d::Identity();
};

struct GraphNode {
  int id = -1;
  SE3 pose;  // map frame
  double stamp = 0.0;
  std::optional<RoomLabel> room;
  std::shared_ptr<Submap> submap;
  std::shared_ptr<Keyframe> keyframe;
};

struct SpacingPolicy {
  double translation = 1.0;             // meters
  double rotation = 30.0 * M_PI / 180;  // radians
};

struct NodePayload {
  std::shared_ptr<Submap> submap;
  std::shared_ptr<Keyframe> keyframe;
};

/// Contiguous run(s) of nodes sharing one room class; merged across revisits.
struct RoomInstance {
  int instance_id = -1;
  std::string class_name;
  std::vector<int> node_ids;  // ascending
};

/// Pose graph with evenly spaced nodes, room labels, and attached payloads.
/// Node ids are dense from 0; odometry factors chain consecutive nodes.
class PoseGraph {
 public:
  PoseGraph() = default;
  explicit PoseGraph(const SpacingPolicy& spacing,
                     std::vector<std::string> room_classes = {});

  const std::vector<GraphNode>& nodes() const { return nodes_; }
  std::vector<GraphNode>& nodes() { return nodes_; }
  const std::vector<Factor>& factors() const { return factors_; }
  const SpacingPolicy& spacing() const { return spacing_; }
  const std::vector<std::string>& roomClasses() const { return room_classes_; }
  void setRoomClasses(std::vector<std::string> classes) { room_classes_ = std::move(classes); }

  /// Information matrix attached to auto-generated odometry factors.
  void setOdometryInformation(const Matrix6d& info) { odom_information_ = info; }

  /// Creates a node iff the graph is empty or the pose moved past the spacing
  /// thresholds since the last node. Returns the new node id, or nullopt.
  /// An odometry factor from the previous node is added on creation.
  std::optional<int> addNodeIfSpaced(const SE3& pose, double stamp,
                                     const NodePayload& payload = {});

  /// Appends a pre-verified loop-closure factor. Returns the factor index.
  int addLoopClosure(int from_id, int to_id, const SE3& relative_pose, const Matrix6d& information);

  /// Stores the argmax class and the full distribution on the node.
  /// `distribution` is ordered like roomClasses() and must sum to 1 (1e-6).
  void assignRoomLabel(int node_id, const std::vector<double>& distribution);

  /// Partitions nodes into room instances: maximal runs of consecutive nodes
  /// with one class, merged into an earlier instance of the same class when
  /// the run's 2D bounding box overlaps that instance's extent.
  std::vector<RoomInstance> groupNodesByRoom() const;

  /// Optional majority-vote smoothing of labels over +-half_window
  /// consecutive nodes (off by default in every pipeline; call explicitly).
  /// Distributions are kept; only the argmax class/score are re-derived from
  /// the window-averaged distribution.
  void smoothRoomLabels(int half_window);

  const GraphNode& node(int id) const;
  GraphNode& node(int id);

  /// Directly appends a node (used by persistence; ids must stay dense).
  void appendNode(GraphNode node);
  void appendFactor(const Factor& factor);

 private:
  SpacingPolicy spacing_;
  std::vector<std::string> room_classes_;
  Matrix6d odom_information_ = Matrix6d::Identity() * 1e4;
  std::vector<GraphNode> nodes_;
  std::vector<Factor> factors_;
};

}  // namespace exomap
