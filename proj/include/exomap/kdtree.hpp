#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

namespace exomap {

/// Static 3D kd-tree for nearest-neighbor queries. Owns its point storage.
class KdTree3 {
 public:
  explicit KdTree3(std::vector<Eigen::Vector3d> points) : points_(std::move(points)) {
    indices_.resize(points_.size());
    std::iota(indices_.begin(), indices_.end(), 0u);
    if (!points_.empty()) build(0, points_.size(), 0);
  }

  bool empty() const { return points_.empty(); }

  /// Squared distance to the nearest point and its index.
  std::pair<double, std::size_t> nearest(const Eigen::Vector3d& query) const {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_idx = 0;
    search(query, 0, points_.size(), 0, best, best_idx);
    return {best, best_idx};
  }

 private:
  // In-place median build over indices_[lo, hi).
  void build(std::size_t lo, std::size_t hi, int axis) {
    if (hi - lo <= 1) return;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::nth_element(indices_.begin() + static_cast<std::ptrdiff_t>(lo),
                     indices_.begin() + static_cast<std::ptrdiff_t>(mid),
                     indices_.begin() + static_cast<std::ptrdiff_t>(hi),
                     [&](std::size_t a, std::size_t b) {
                       return points_[a][axis] < points_[b][axis];
                     });
    build(lo, mid, (axis + 1) % 3);
    build(mid + 1, hi, (axis + 1) % 3);
  }

  void search(const Eigen::Vector3d& q, std::size_t lo, std::size_t hi, int axis, double& best,
              std::size_t& best_idx) const {
    if (lo >= hi) return;
    const std::size_t mid = lo + (hi - lo) / 2;
    const std::size_t idx = indices_[mid];
    const double d = (points_[idx] - q).squaredNorm();
    if (d < best) {
      best = d;
      best_idx = idx;
    }
    const double plane = q[axis] - points_[idx][axis];
    const int next = (axis + 1) % 3;
    if (plane < 0.0) {
      search(q, lo, mid, next, best, best_idx);
      if (plane * plane < best) search(q, mid + 1, hi, next, best, best_idx);
    } else {
      search(q, mid + 1, hi, next, best, best_idx);
      if (plane * plane < best) search(q, lo, mid, next, best, best_idx);
    }
  }

  std::vector<Eigen::Vector3d> points_;
  std::vector<std::size_t> indices_;
};

}  // namespace exomap
