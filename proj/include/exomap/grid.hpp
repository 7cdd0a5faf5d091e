#pragma once

#include <Eigen/Core>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "exomap/errors.hpp"

namespace exomap {

/// Unknown-cell sentinel. Layers are dense; unobserved cells hold NaN.
inline constexpr double kUnknown = std::numeric_limits<double>::quiet_NaN();

inline bool isKnown(double v) { return std::isfinite(v); }

struct CellIndex {
  int row = 0;
  int col = 0;

  bool operator==(const CellIndex& o) const { return row == o.row && col == o.col; }
  bool operator!=(const CellIndex& o) const { return !(*this == o); }
};

/// Geometry of a regular 2D grid. `origin` is the map-frame position of the
/// center of cell (0,0). Rows advance along +y, columns along +x.
class GridGeometry {
 public:
  GridGeometry() = default;

  GridGeometry(double resolution, const Eigen::Vector2d& origin, int rows, int cols)
      : resolution_(resolution), origin_(origin), rows_(rows), cols_(cols) {
    if (resolution <= 0.0) throw InvalidArgumentError("grid resolution must be > 0");
    if (rows < 1 || cols < 1) throw InvalidArgumentError("grid must have at least one cell");
  }

  double resolution() const { return resolution_; }
  const Eigen::Vector2d& origin() const { return origin_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t cellCount() const { return static_cast<std::size_t>(rows_) * cols_; }

  bool contains(const CellIndex& c) const {
    return c.row >= 0 && c.row < rows_ && c.col >= 0 && c.col < cols_;
  }

  std::size_t linearIndex(const CellIndex& c) const {
    return static_cast<std::size_t>(c.row) * cols_ + c.col;
  }

  /// Nearest-center cell lookup; ties at half-cell boundaries resolve toward
  /// the lower index (so the max-corner edge of the coverage rectangle is
  /// inside, the min-corner edge is out).
  /// Throws OutOfBoundsError if p is outside the covered rectangle.
  CellIndex worldToCell(const Eigen::Vector2d& p) const {
    const CellIndex c{roundHalfDown((p.y() - origin_.y()) / resolution_),
                      roundHalfDown((p.x() - origin_.x()) / resolution_)};
    if (!contains(c)) throw OutOfBoundsError("point outside grid coverage");
    return c;
  }

  bool isInside(const Eigen::Vector2d& p) const {
    const CellIndex c{roundHalfDown((p.y() - origin_.y()) / resolution_),
                      roundHalfDown((p.x() - origin_.x()) / resolution_)};
    return contains(c);
  }

  /// Center of cell c in map-frame coordinates. Exact inverse of worldToCell
  /// at cell centers.
  Eigen::Vector2d cellToWorld(const CellIndex& c) const {
    if (!contains(c)) throw OutOfBoundsError("cell index outside grid");
    return origin_ + Eigen::Vector2d(c.col * resolution_, c.row * resolution_);
  }

  bool operator==(const GridGeometry& o) const {
    return resolution_ == o.resolution_ && origin_ == o.origin_ && rows_ == o.rows_ &&
           cols_ == o.cols_;
  }

 private:
  static int roundHalfDown(double v) { return static_cast<int>(std::ceil(v - 0.5)); }

  double resolution_ = 0.02;
  Eigen::Vector2d origin_ = Eigen::Vector2d::Zero();
  int rows_ = 1;
  int cols_ = 1;
};

/// One named value plane of a multi-layer grid, row-major.
struct Layer {
  std::string name;
  std::vector<double> values;
};

struct CellNeighborhood {
  CellIndex center;
  double radius = 0.0;
  std::vector<CellIndex> members;
};

/// Cells whose centers lie within Euclidean distance r of the center cell's
/// center. Includes the center itself; out-of-bounds cells are excluded.
CellNeighborhood cellsWithinRadius(const GridGeometry& g, const CellIndex& center, double r);

/// Resolution-aligned stack of named layers over one geometry. An "elevation"
/// layer always exists.
class MultiLayerGrid {
 public:
  explicit MultiLayerGrid(const GridGeometry& geometry, const std::string& frame = "odom");

  const GridGeometry& geometry() const { return geometry_; }
  const std::string& frame() const { return frame_; }
  void setFrame(const std::string& frame) { frame_ = frame; }

  bool hasLayer(const std::string& name) const { return layers_.count(name) > 0; }

  /// Creates the layer filled with NaN if absent.
  Layer& addLayer(const std::string& name);

  Layer& layer(const std::string& name);
  const Layer& layer(const std::string& name) const;

  double& at(const std::string& layer_name, const CellIndex& c) {
    return layer(layer_name).values[geometry_.linearIndex(c)];
  }
  double at(const std::string& layer_name, const CellIndex& c) const {
    return layer(layer_name).values[geometry_.linearIndex(c)];
  }

  std::vector<std::string> layerNames() const;

  /// Copies the window [min_corner, max_corner] (map-frame meters) into a new
  /// grid. The result covers the intersection of the window with this grid;
  /// values (including unknowns) are copied verbatim.
  MultiLayerGrid crop(const Eigen::Vector2d& min_corner, const Eigen::Vector2d& max_corner) const;

 private:
  GridGeometry geometry_;
  std::string frame_;
  std::map<std::string, Layer> layers_;
};

}  // namespace exomap
