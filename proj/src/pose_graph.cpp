#include "exomap/pose_graph.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "exomap/errors.hpp"

namespace exomap {

namespace {

struct Box2d {
  Eigen::Vector2d min{std::numeric_limits<double>::infinity(),
                      std::numeric_limits<double>::infinity()};
  Eigen::Vector2d max{-std::numeric_limits<double>::infinity(),
                      -std::numeric_limits<double>::infinity()};

  void extend(const Eigen::Vector2d& p) {
    min = min.cwiseMin(p);
    max = max.cwiseMax(p);
  }

  bool overlaps(const Box2d& o) const {
    return min.x() <= o.max.x() && o.min.x() <= max.x() && min.y() <= o.max.y() &&
           o.min.y() <= max.y();
  }
};

bool isSymmetricPositiveDefinite(const Matrix6d& m) {
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9) return false;
  Eigen::SelfAdjointEigenSolver<Matrix6d> eig(m);
  return eig.info() == Eigen::Success && eig.eigenvalues().minCoeff() > 0.0;
}

}  // namespace

PoseGraph::PoseGraph(const SpacingPolicy& spacing, std::vector<std::string> room_classes)
    : spacing_(spacing), room_classes_(std::move(room_classes)) {}

std::optional<int> PoseGraph::addNodeIfSpaced(const SE3& pose, double stamp,
                                              const NodePayload& payload) {
  if (!nodes_.empty() && stamp < nodes_.back().stamp) {
    throw InvalidArgumentError("node stamps must be monotonic");
  }
  if (!nodes_.empty()) {
    const SE3& last = nodes_.back().pose;
    const SE3 delta = last.inverse() * pose;
    const double translation = delta.translation().norm();
    const double rotation = delta.rotationAngle();
    if (translation < spacing_.translation && rotation < spacing_.rotation) {
      return std::nullopt;
    }
  }

  GraphNode node;
  node.id = static_cast<int>(nodes_.size());
  node.pose = pose;
  node.stamp = stamp;
  node.submap = payload.submap;
  node.keyframe = payload.keyframe;
  nodes_.push_back(std::move(node));

  if (nodes_.size() > 1) {
    Factor f;
    f.kind = Factor::Kind::kOdometry;
    f.from_id = nodes_[nodes_.size() - 2].id;
    f.to_id = nodes_.back().id;
    f.relative_pose = nodes_[nodes_.size() - 2].pose.inverse() * pose;
    f.information = odom_information_;
    factors_.push_back(std::move(f));
  }
  return nodes_.back().id;
}

int PoseGraph::addLoopClosure(int from_id, int to_id, const SE3& relative_pose,
                              const Matrix6d& information) {
  if (from_id == to_id) throw InvalidArgumentError("loop closure must join distinct nodes");
  if (from_id < 0 || from_id >= static_cast<int>(nodes_.size()) || to_id < 0 ||
      to_id >= static_cast<int>(nodes_.size())) {
    throw InvalidArgumentError("loop closure references unknown node id");
  }
  if (!isSymmetricPositiveDefinite(information)) {
    throw InvalidArgumentError("loop closure information matrix must be symmetric positive definite");
  }
  Factor f;
  f.kind = Factor::Kind::kLoopClosure;
  f.from_id = from_id;
  f.to_id = to_id;
  f.relative_pose = relative_pose;
  f.information = information;
  factors_.push_back(std::move(f));
  return static_cast<int>(factors_.size()) - 1;
}

void PoseGraph::assignRoomLabel(int node_id, const std::vector<double>& distribution) {
  GraphNode& n = node(node_id);
  if (room_classes_.empty()) throw InvalidArgumentError("no room classes configured");
  if (distribution.size() != room_classes_.size()) {
    throw InvalidArgumentError("room distribution length does not match class list");
  }
  double sum = 0.0;
  for (double v : distribution) {
    if (v < 0.0) throw InvalidArgumentError("room distribution entries must be non-negative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw InvalidArgumentError("room distribution must sum to 1");
  }

  // Argmax; ties break by class-list order.
  std::size_t best = 0;
  for (std::size_t i = 1; i < distribution.size(); ++i) {
    if (distribution[i] > distribution[best]) best = i;
  }
  RoomLabel label;
  label.class_name = room_classes_[best];
  label.score = distribution[best];
  label.distribution = distribution;
  n.room = std::move(label);
}

std::vector<RoomInstance> PoseGraph::groupNodesByRoom() const {
  std::vector<RoomInstance> instances;
  std::vector<Box2d> boxes;

  std::size_t i = 0;
  while (i < nodes_.size()) {
    if (!nodes_[i].room) {
      throw InvalidArgumentError("node " + std::to_string(nodes_[i].id) + " has no room label");
    }
    const std::string& cls = nodes_[i].room->class_name;
    std::size_t j = i;
    Box2d run_box;
    std::vector<int> run_ids;
    while (j < nodes_.size() && nodes_[j].room && nodes_[j].room->class_name == cls) {
      run_box.extend(nodes_[j].pose.translation().head<2>());
      run_ids.push_back(nodes_[j].id);
      ++j;
    }

    // Revisit detection: merge into the earliest same-class instance whose
    // spatial extent the run touches.
    int target = -1;
    for (std::size_t k = 0; k < instances.size(); ++k) {
      if (instances[k].class_name == cls && boxes[k].overlaps(run_box)) {
        target = static_cast<int>(k);
        break;
      }
    }
    if (target < 0) {
      RoomInstance inst;
      inst.instance_id = static_cast<int>(instances.size());
      inst.class_name = cls;
      inst.node_ids = run_ids;
      instances.push_back(std::move(inst));
      boxes.push_back(run_box);
    } else {
      auto& inst = instances[static_cast<std::size_t>(target)];
      inst.node_ids.insert(inst.node_ids.end(), run_ids.begin(), run_ids.end());
      std::sort(inst.node_ids.begin(), inst.node_ids.end());
      boxes[static_cast<std::size_t>(target)].extend(run_box.min);
      boxes[static_cast<std::size_t>(target)].extend(run_box.max);
    }
    i = j;
  }
  return instances;
}

void PoseGraph::smoothRoomLabels(int half_window) {
  if (half_window < 1) throw InvalidArgumentError("smoothing window must be >= 1");
  std::vector<RoomLabel> smoothed(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!nodes_[i].room) {
      throw InvalidArgumentError("cannot smooth labels with unlabeled nodes");
    }
    std::vector<double> mean(room_classes_.size(), 0.0);
    int count = 0;
    for (int j = -half_window; j <= half_window; ++j) {
      const std::ptrdiff_t k = static_cast<std::ptrdiff_t>(i) + j;
      if (k < 0 || k >= static_cast<std::ptrdiff_t>(nodes_.size())) continue;
      const auto& dist = nodes_[static_cast<std::size_t>(k)].room->distribution;
      for (std::size_t c = 0; c < mean.size() && c < dist.size(); ++c) mean[c] += dist[c];
      ++count;
    }
    std::size_t best = 0;
    for (std::size_t c = 1; c < mean.size(); ++c) {
      if (mean[c] > mean[best]) best = c;
    }
    smoothed[i].class_name = room_classes_[best];
    smoothed[i].score = mean[best] / std::max(count, 1);
    smoothed[i].distribution = nodes_[i].room->distribution;
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) nodes_[i].room = smoothed[i];
}

const GraphNode& PoseGraph::node(int id) const {
  if (id < 0 || id >= static_cast<int>(nodes_.size())) {
    throw InvalidArgumentError("unknown node id " + std::to_string(id));
  }
  return nodes_[static_cast<std::size_t>(id)];
}

GraphNode& PoseGraph::node(int id) {
  if (id < 0 || id >= static_cast<int>(nodes_.size())) {
    throw InvalidArgumentError("unknown node id " + std::to_string(id));
  }
  return nodes_[static_cast<std::size_t>(id)];
}

void PoseGraph::appendNode(GraphNode node) {
  if (node.id != static_cast<int>(nodes_.size())) {
    throw InvalidArgumentError("node ids must be dense from 0");
  }
  nodes_.push_back(std::move(node));
}

void PoseGraph::appendFactor(const Factor& factor) {
  if (factor.from_id < 0 || factor.from_id >= static_cast<int>(nodes_.size()) ||
      factor.to_id < 0 || factor.to_id >= static_cast<int>(nodes_.size())) {
    throw InvalidArgumentError("factor references unknown node id");
  }
  factors_.push_back(factor);
}

}  // namespace exomap
