#include "exomap/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "exomap/errors.hpp"

namespace exomap {

namespace {

double medianOf(std::vector<double>& values) {
  const std::size_t n = values.size();
  const std::size_t mid = n / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  if (n % 2 == 1) return values[mid];
  const double upper = values[mid];
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

}  // namespace

MultiLayerGrid transformSubmap(const Submap& submap, const SE3& optimized_node_pose) {
  const SE3 correction = optimized_node_pose * submap.capture_pose.inverse();
  const GridGeometry& src = submap.grid.geometry();
  const double res = src.resolution();
  const Layer& elevation = submap.grid.layer("elevation");
  const bool has_variance = submap.grid.hasLayer("variance");

  // First pass: transform every known cell center and take the exact 2D AABB.
  // For an identity correction this reproduces the source geometry exactly.
  std::vector<Eigen::Vector3d> moved;
  std::vector<std::size_t> moved_src;
  moved.reserve(src.cellCount());
  Eigen::Vector2d lo(std::numeric_limits<double>::infinity(),
                     std::numeric_limits<double>::infinity());
  Eigen::Vector2d hi = -lo;
  for (int r = 0; r < src.rows(); ++r) {
    for (int c = 0; c < src.cols(); ++c) {
      const std::size_t idx = src.linearIndex({r, c});
      const double h = elevation.values[idx];
      if (!isKnown(h)) continue;
      const Eigen::Vector2d xy = src.cellToWorld({r, c});
      const Eigen::Vector3d p = correction * Eigen::Vector3d(xy.x(), xy.y(), h);
      lo = lo.cwiseMin(p.head<2>());
      hi = hi.cwiseMax(p.head<2>());
      moved.push_back(p);
      moved_src.push_back(idx);
    }
  }
  if (moved.empty()) {
    // All-unknown submap: keep the source footprint, values stay unknown.
    MultiLayerGrid empty(GridGeometry(res, src.origin(), src.rows(), src.cols()), "map");
    empty.addLayer("variance");
    return empty;
  }
  const int rows = static_cast<int>(std::floor((hi.y() - lo.y()) / res + 0.5)) + 1;
  const int cols = static_cast<int>(std::floor((hi.x() - lo.x()) / res + 0.5)) + 1;
  GridGeometry target_geom(res, lo, rows, cols);
  MultiLayerGrid target(target_geom, "map");
  Layer& out_elev = target.layer("elevation");
  Layer& out_var = target.addLayer("variance");

  // Second pass: nearest-cell scatter with nearest-source-center collisions.
  std::vector<double> best_dist(target_geom.cellCount(),
                                std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < moved.size(); ++i) {
    const Eigen::Vector3d& p = moved[i];
    if (!target_geom.isInside(p.head<2>())) continue;
    const CellIndex cell = target_geom.worldToCell(p.head<2>());
    const std::size_t idx = target_geom.linearIndex(cell);
    const double d = (target_geom.cellToWorld(cell) - p.head<2>()).squaredNorm();
    if (d < best_dist[idx]) {
      best_dist[idx] = d;
      out_elev.values[idx] = p.z();
      if (has_variance) out_var.values[idx] = submap.grid.layer("variance").values[moved_src[i]];
    }
  }
  return target;
}

RoomTerrainMap fuseRoom(const std::vector<MultiLayerGrid>& submaps) {
  if (submaps.empty()) throw InvalidArgumentError("fuseRoom needs at least one submap");
  const double res = submaps.front().geometry().resolution();
  for (const auto& s : submaps) {
    if (std::abs(s.geometry().resolution() - res) > 1e-12) {
      throw InvalidArgumentError("fuseRoom submaps must share one resolution");
    }
  }

  Eigen::Vector2d lo(std::numeric_limits<double>::infinity(),
                     std::numeric_limits<double>::infinity());
  Eigen::Vector2d hi = -lo;
  for (const auto& s : submaps) {
    const GridGeometry& g = s.geometry();
    lo = lo.cwiseMin(g.origin());
    hi = hi.cwiseMax(g.origin() + res * Eigen::Vector2d(g.cols() - 1, g.rows() - 1));
  }
  const int rows = static_cast<int>(std::floor((hi.y() - lo.y()) / res + 0.5)) + 1;
  const int cols = static_cast<int>(std::floor((hi.x() - lo.x()) / res + 0.5)) + 1;

  RoomTerrainMap room;
  room.grid = MultiLayerGrid(GridGeometry(res, lo, rows, cols), "map");
  Layer& elevation = room.grid.layer("elevation");
  Layer& support = room.grid.addLayer("support_count");

  std::vector<double> heights;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const std::size_t idx = room.grid.geometry().linearIndex({r, c});
      const Eigen::Vector2d p = room.grid.geometry().cellToWorld({r, c});
      heights.clear();
      for (const auto& s : submaps) {
        if (!s.geometry().isInside(p)) continue;
        const double h = s.layer("elevation").values[s.geometry().linearIndex(
            s.geometry().worldToCell(p))];
        if (isKnown(h)) heights.push_back(h);
      }
      if (heights.empty()) {
        support.values[idx] = 0.0;
        continue;
      }
      elevation.values[idx] = medianOf(heights);
      support.values[idx] = static_cast<double>(heights.size());
    }
  }
  return room;
}

FusionReport fuseAllRooms(const PoseGraph& graph) {
  FusionReport report;
  for (const auto& instance : graph.groupNodesByRoom()) {
    std::vector<MultiLayerGrid> transformed;
    for (int node_id : instance.node_ids) {
      const GraphNode& node = graph.node(node_id);
      if (!node.submap) continue;
      transformed.push_back(transformSubmap(*node.submap, node.pose));
    }
    if (transformed.empty()) {
      report.skipped.emplace_back(instance.instance_id,
                                  "room instance has no submaps attached");
      continue;
    }
    RoomTerrainMap room = fuseRoom(transformed);
    room.instance_id = instance.instance_id;
    room.class_name = instance.class_name;
    room.node_ids = instance.node_ids;
    report.rooms.push_back(std::move(room));
  }
  return report;
}

}  // namespace exomap
