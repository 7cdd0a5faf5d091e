#pragma once

#include <cmath>

#include "exomap/grid.hpp"

namespace exomap {

struct TraversabilityParams {
  double stride_radius = 0.20;  // s*, meters
  double step_height = 0.20;    // h*, meters
  int min_support = 3;          // known neighbors required to score a cell
  // Off by default: fused maps have holes, not hazards. When set, any unknown
  // neighbor inside the stride radius forces a 0 score.
  bool treat_unknown_as_untraversable = false;
};

struct NormalsBaselineParams {
  double fit_radius = 0.10;          // meters
  double max_slope = M_PI / 4.0;     // radians from vertical
  int min_support = 3;               // cells needed for a plane fit
};

/// Per-cell values aligned to a terrain grid; NaN where unscored. Also reused
/// for binary label grids in the classification evaluation.
struct TraversabilityMap {
  GridGeometry geometry;
  std::vector<double> values;

  TraversabilityMap() = default;
  explicit TraversabilityMap(const GridGeometry& g)
      : geometry(g), values(g.cellCount(), kUnknown) {}

  double at(const CellIndex& c) const { return values[geometry.linearIndex(c)]; }
  double& at(const CellIndex& c) { return values[geometry.linearIndex(c)]; }
};

/// Maximum absolute height difference between cell i and its known neighbors
/// within the stride radius (the neighborhood includes i itself).
/// Throws InvalidArgumentError when the center height is unknown.
double maxHeightDiff(const MultiLayerGrid& map, const CellIndex& i, double stride_radius);

/// Step-height score: t = 1 - min(h_max / h*, 1).
double traversabilityScore(double h_max, double step_height);

/// Scores every known cell of the elevation layer. Cells with fewer than
/// min_support known neighbors (center excluded) stay unknown.
TraversabilityMap scoreMap(const MultiLayerGrid& map, const TraversabilityParams& params);

/// Surface-normal comparison method: least-squares plane fit over the
/// neighborhood, scored by the normal's angle from vertical. Degenerate
/// (collinear) neighborhoods stay unknown.
TraversabilityMap normalsBaseline(const MultiLayerGrid& map, const NormalsBaselineParams& params);

/// Copies a score field into a grid layer (geometries must match).
void writeScoreLayer(MultiLayerGrid& grid, const TraversabilityMap& scores,
                     const std::string& layer_name);

}  // namespace exomap
