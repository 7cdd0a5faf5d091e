#pragma once

#include <optional>

#include "exomap/mesh.hpp"

namespace exomap {

struct RayHit {
  double distance = 0.0;  // along the (unit) ray direction
  int triangle = -1;
  Eigen::Vector3d point = Eigen::Vector3d::Zero();
};

/// Bounding-volume hierarchy over mesh triangles for raycasting.
class TriangleBvh {
 public:
  TriangleBvh() = default;
  explicit TriangleBvh(const TriMesh& mesh);

  /// Nearest intersection along origin + t * direction for t in (1e-9, max_range].
  /// `direction` must be normalized.
  std::optional<RayHit> raycast(const Eigen::Vector3d& origin, const Eigen::Vector3d& direction,
                                double max_range) const;

  bool empty() const { return nodes_.empty(); }

 private:
  struct Node {
    Eigen::Vector3d lo, hi;
    int left = -1;   // internal: child index; leaf: first triangle slot
    int right = -1;  // internal: child index; leaf: one past last slot
    bool leaf = false;
  };

  int build(int begin, int end);
  void intersectNode(int node, const Eigen::Vector3d& origin, const Eigen::Vector3d& inv_dir,
                     const Eigen::Vector3d& direction, double& best, int& best_tri) const;

  std::vector<Node> nodes_;
  std::vector<int> order_;  // triangle indices, leaf-contiguous
  std::vector<Eigen::Vector3d> a_, edge1_, edge2_;
};

}  // namespace exomap
