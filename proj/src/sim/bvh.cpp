#include "exomap/sim/bvh.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <numeric>

namespace exomap {

namespace {
constexpr int kLeafSize = 4;
constexpr double kRayEpsilon = 1e-9;
}  // namespace

TriangleBvh::TriangleBvh(const TriMesh& mesh) {
  const int n = static_cast<int>(mesh.triangles.size());
  if (n == 0) return;
  a_.resize(mesh.triangles.size());
  edge1_.resize(mesh.triangles.size());
  edge2_.resize(mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    a_[t] = mesh.vertices[static_cast<std::size_t>(tri[0])];
    edge1_[t] = mesh.vertices[static_cast<std::size_t>(tri[1])] - a_[t];
    edge2_[t] = mesh.vertices[static_cast<std::size_t>(tri[2])] - a_[t];
  }
  order_.resize(static_cast<std::size_t>(n));
  std::iota(order_.begin(), order_.end(), 0);
  nodes_.reserve(static_cast<std::size_t>(2 * n));
  build(0, n);
}

int TriangleBvh::build(int begin, int end) {
  Node node;
  node.lo = Eigen::Vector3d::Constant(std::numeric_limits<double>::infinity());
  node.hi = -node.lo;
  for (int i = begin; i < end; ++i) {
    const int t = order_[static_cast<std::size_t>(i)];
    const Eigen::Vector3d v0 = a_[t];
    const Eigen::Vector3d v1 = a_[t] + edge1_[t];
    const Eigen::Vector3d v2 = a_[t] + edge2_[t];
    node.lo = node.lo.cwiseMin(v0).cwiseMin(v1).cwiseMin(v2);
    node.hi = node.hi.cwiseMax(v0).cwiseMax(v1).cwiseMax(v2);
  }

  const int index = static_cast<int>(nodes_.size());
  nodes_.push_back(node);
  if (end - begin <= kLeafSize) {
    nodes_[static_cast<std::size_t>(index)].leaf = true;
    nodes_[static_cast<std::size_t>(index)].left = begin;
    nodes_[static_cast<std::size_t>(index)].right = end;
    return index;
  }

  // Median split along the widest centroid axis.
  Eigen::Vector3d clo = Eigen::Vector3d::Constant(std::numeric_limits<double>::infinity());
  Eigen::Vector3d chi = -clo;
  for (int i = begin; i < end; ++i) {
    const int t = order_[static_cast<std::size_t>(i)];
    const Eigen::Vector3d c = a_[t] + (edge1_[t] + edge2_[t]) / 3.0;
    clo = clo.cwiseMin(c);
    chi = chi.cwiseMax(c);
  }
  int axis = 0;
  (chi - clo).maxCoeff(&axis);
  const int mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](int ta, int tb) {
                     const double ca = a_[ta][axis] + (edge1_[ta][axis] + edge2_[ta][axis]) / 3.0;
                     const double cb = a_[tb][axis] + (edge1_[tb][axis] + edge2_[tb][axis]) / 3.0;
                     return ca < cb;
                   });

  const int left = build(begin, mid);
  const int right = build(mid, end);
  nodes_[static_cast<std::size_t>(index)].left = left;
  nodes_[static_cast<std::size_t>(index)].right = right;
  return index;
}

void TriangleBvh::intersectNode(int node_idx, const Eigen::Vector3d& origin,
                                const Eigen::Vector3d& inv_dir, const Eigen::Vector3d& direction,
                                double& best, int& best_tri) const {
  const Node& node = nodes_[static_cast<std::size_t>(node_idx)];

  // Slab test.
  double t0 = kRayEpsilon, t1 = best;
  for (int k = 0; k < 3; ++k) {
    double near = (node.lo[k] - origin[k]) * inv_dir[k];
    double far = (node.hi[k] - origin[k]) * inv_dir[k];
    if (inv_dir[k] < 0.0) std::swap(near, far);
    t0 = std::max(t0, near);
    t1 = std::min(t1, far);
    if (t0 > t1) return;
  }

  if (node.leaf) {
    for (int i = node.left; i < node.right; ++i) {
      const int t = order_[static_cast<std::size_t>(i)];
      // Moller-Trumbore.
      const Eigen::Vector3d pvec = direction.cross(edge2_[t]);
      const double det = edge1_[t].dot(pvec);
      if (std::abs(det) < 1e-14) continue;
      const double inv_det = 1.0 / det;
      const Eigen::Vector3d tvec = origin - a_[t];
      const double u = tvec.dot(pvec) * inv_det;
      if (u < -1e-12 || u > 1.0 + 1e-12) continue;
      const Eigen::Vector3d qvec = tvec.cross(edge1_[t]);
      const double v = direction.dot(qvec) * inv_det;
      if (v < -1e-12 || u + v > 1.0 + 1e-12) continue;
      const double dist = edge2_[t].dot(qvec) * inv_det;
      if (dist > kRayEpsilon && dist < best) {
        best = dist;
        best_tri = t;
      }
    }
    return;
  }
  intersectNode(node.left, origin, inv_dir, direction, best, best_tri);
  intersectNode(node.right, origin, inv_dir, direction, best, best_tri);
}

std::optional<RayHit> TriangleBvh::raycast(const Eigen::Vector3d& origin,
                                           const Eigen::Vector3d& direction,
                                           double max_range) const {
  if (nodes_.empty()) return std::nullopt;
  const Eigen::Vector3d inv_dir = direction.cwiseInverse();
  double best = max_range;
  int best_tri = -1;
  intersectNode(0, origin, inv_dir, direction, best, best_tri);
  if (best_tri < 0) return std::nullopt;
  RayHit hit;
  hit.distance = best;
  hit.triangle = best_tri;
  hit.point = origin + best * direction;
  return hit;
}

}  // namespace exomap
