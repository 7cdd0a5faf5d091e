#include "exomap/grid.hpp"

#include <algorithm>

namespace exomap {

CellNeighborhood cellsWithinRadius(const GridGeometry& g, const CellIndex& center, double r) {
  if (!g.contains(center)) throw OutOfBoundsError("neighborhood center outside grid");
  if (r < 0.0) throw InvalidArgumentError("neighborhood radius must be >= 0");

  CellNeighborhood n;
  n.center = center;
  n.radius = r;

  const int span = static_cast<int>(std::floor(r / g.resolution())) + 1;
  const double r2 = r * r;
  for (int dr = -span; dr <= span; ++dr) {
    const int row = center.row + dr;
    if (row < 0 || row >= g.rows()) continue;
    for (int dc = -span; dc <= span; ++dc) {
      const int col = center.col + dc;
      if (col < 0 || col >= g.cols()) continue;
      const double dy = dr * g.resolution();
      const double dx = dc * g.resolution();
      if (dx * dx + dy * dy <= r2) n.members.push_back({row, col});
    }
  }
  return n;
}

MultiLayerGrid::MultiLayerGrid(const GridGeometry& geometry, const std::string& frame)
    : geometry_(geometry), frame_(frame) {
  addLayer("elevation");
}

Layer& MultiLayerGrid::addLayer(const std::string& name) {
  auto it = layers_.find(name);
  if (it == layers_.end()) {
    Layer l;
    l.name = name;
    l.values.assign(geometry_.cellCount(), kUnknown);
    it = layers_.emplace(name, std::move(l)).first;
  }
  return it->second;
}

Layer& MultiLayerGrid::layer(const std::string& name) {
  auto it = layers_.find(name);
  if (it == layers_.end()) throw InvalidArgumentError("no such layer: " + name);
  return it->second;
}

const Layer& MultiLayerGrid::layer(const std::string& name) const {
  auto it = layers_.find(name);
  if (it == layers_.end()) throw InvalidArgumentError("no such layer: " + name);
  return it->second;
}

std::vector<std::string> MultiLayerGrid::layerNames() const {
  std::vector<std::string> names;
  names.reserve(layers_.size());
  for (const auto& [name, l] : layers_) names.push_back(name);
  return names;
}

MultiLayerGrid MultiLayerGrid::crop(const Eigen::Vector2d& min_corner,
                                    const Eigen::Vector2d& max_corner) const {
  if (min_corner.x() > max_corner.x() || min_corner.y() > max_corner.y()) {
    throw InvalidArgumentError("crop corners must be ordered");
  }
  const double res = geometry_.resolution();
  // Cells whose centers fall inside the window, clamped to the grid.
  const int row0 = std::max(0, static_cast<int>(std::ceil((min_corner.y() - geometry_.origin().y()) / res - 1e-9)));
  const int col0 = std::max(0, static_cast<int>(std::ceil((min_corner.x() - geometry_.origin().x()) / res - 1e-9)));
  const int row1 = std::min(geometry_.rows() - 1,
                            static_cast<int>(std::floor((max_corner.y() - geometry_.origin().y()) / res + 1e-9)));
  const int col1 = std::min(geometry_.cols() - 1,
                            static_cast<int>(std::floor((max_corner.x() - geometry_.origin().x()) / res + 1e-9)));
  if (row1 < row0 || col1 < col0) throw OutOfBoundsError("crop window does not intersect grid");

  GridGeometry out_geom(res, geometry_.origin() + res * Eigen::Vector2d(col0, row0),
                        row1 - row0 + 1, col1 - col0 + 1);
  MultiLayerGrid out(out_geom, frame_);
  for (const auto& [name, src] : layers_) {
    Layer& dst = out.addLayer(name);
    for (int r = row0; r <= row1; ++r) {
      for (int c = col0; c <= col1; ++c) {
        dst.values[out_geom.linearIndex({r - row0, c - col0})] =
            src.values[geometry_.linearIndex({r, c})];
      }
    }
  }
  return out;
}

}  // namespace exomap
