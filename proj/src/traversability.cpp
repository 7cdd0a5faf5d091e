#include "exomap/traversability.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "exomap/errors.hpp"

namespace exomap {

namespace {

// Integer offsets of the disk of radius r (in meters) on the given lattice.
std::vector<CellIndex> diskOffsets(double r, double resolution) {
  std::vector<CellIndex> offsets;
  const int span = static_cast<int>(std::floor(r / resolution)) + 1;
  const double r2 = r * r;
  for (int dr = -span; dr <= span; ++dr) {
    for (int dc = -span; dc <= span; ++dc) {
      const double dy = dr * resolution;
      const double dx = dc * resolution;
      if (dx * dx + dy * dy <= r2) offsets.push_back({dr, dc});
    }
  }
  return offsets;
}

}  // namespace

double maxHeightDiff(const MultiLayerGrid& map, const CellIndex& i, double stride_radius) {
  const GridGeometry& g = map.geometry();
  const Layer& elevation = map.layer("elevation");
  const double center = elevation.values[g.linearIndex(i)];
  if (!isKnown(center)) throw InvalidArgumentError("maxHeightDiff needs a known center height");

  double h_max = 0.0;
  for (const auto& off : diskOffsets(stride_radius, g.resolution())) {
    const CellIndex j{i.row + off.row, i.col + off.col};
    if (!g.contains(j)) continue;
    const double h = elevation.values[g.linearIndex(j)];
    if (!isKnown(h)) continue;
    h_max = std::max(h_max, std::abs(h - center));
  }
  return h_max;
}

double traversabilityScore(double h_max, double step_height) {
  if (step_height <= 0.0) throw InvalidArgumentError("step height must be > 0");
  return 1.0 - std::min(h_max / step_height, 1.0);
}

TraversabilityMap scoreMap(const MultiLayerGrid& map, const TraversabilityParams& params) {
  const GridGeometry& g = map.geometry();
  const Layer& elevation = map.layer("elevation");
  TraversabilityMap out(g);

  const auto offsets = diskOffsets(params.stride_radius, g.resolution());
  for (int r = 0; r < g.rows(); ++r) {
    for (int c = 0; c < g.cols(); ++c) {
      const std::size_t idx = g.linearIndex({r, c});
      const double center = elevation.values[idx];
      if (!isKnown(center)) continue;

      double h_max = 0.0;
      int known_neighbors = 0;
      bool unknown_neighbor = false;
      for (const auto& off : offsets) {
        const CellIndex j{r + off.row, c + off.col};
        if (!g.contains(j)) continue;
        const double h = elevation.values[g.linearIndex(j)];
        if (!isKnown(h)) {
          unknown_neighbor = true;
          continue;
        }
        if (off.row != 0 || off.col != 0) ++known_neighbors;
        h_max = std::max(h_max, std::abs(h - center));
      }
      if (known_neighbors < params.min_support) continue;
      if (params.treat_unknown_as_untraversable && unknown_neighbor) {
        out.values[idx] = 0.0;
        continue;
      }
      out.values[idx] = traversabilityScore(h_max, params.step_height);
    }
  }
  return out;
}

TraversabilityMap normalsBaseline(const MultiLayerGrid& map, const NormalsBaselineParams& params) {
  const GridGeometry& g = map.geometry();
  const Layer& elevation = map.layer("elevation");
  TraversabilityMap out(g);

  const auto offsets = diskOffsets(params.fit_radius, g.resolution());
  for (int r = 0; r < g.rows(); ++r) {
    for (int c = 0; c < g.cols(); ++c) {
      const std::size_t idx = g.linearIndex({r, c});
      if (!isKnown(elevation.values[idx])) continue;

      // Gather the neighborhood, centered for conditioning.
      std::vector<Eigen::Vector3d> pts;
      Eigen::Vector3d mean = Eigen::Vector3d::Zero();
      for (const auto& off : offsets) {
        const CellIndex j{r + off.row, c + off.col};
        if (!g.contains(j)) continue;
        const double h = elevation.values[g.linearIndex(j)];
        if (!isKnown(h)) continue;
        const Eigen::Vector2d xy = g.cellToWorld(j);
        pts.emplace_back(xy.x(), xy.y(), h);
        mean += pts.back();
      }
      if (static_cast<int>(pts.size()) < std::max(params.min_support, 3)) continue;
      mean /= static_cast<double>(pts.size());

      // Least-squares plane z = a*x + b*y + d on centered coordinates.
      Eigen::Matrix2d ata = Eigen::Matrix2d::Zero();
      Eigen::Vector2d atb = Eigen::Vector2d::Zero();
      for (const auto& p : pts) {
        const Eigen::Vector2d q = (p - mean).head<2>();
        ata += q * q.transpose();
        atb += q * (p.z() - mean.z());
      }
      // Collinear neighborhoods leave the normal equations singular.
      const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(ata);
      if (eig.eigenvalues().minCoeff() < 1e-12 * std::max(eig.eigenvalues().maxCoeff(), 1e-12)) {
        continue;
      }
      const Eigen::Vector2d ab = ata.ldlt().solve(atb);
      const double angle = std::atan(ab.norm());  // normal angle from vertical
      out.values[idx] = 1.0 - std::min(angle / params.max_slope, 1.0);
    }
  }
  return out;
}

void writeScoreLayer(MultiLayerGrid& grid, const TraversabilityMap& scores,
                     const std::string& layer_name) {
  if (!(grid.geometry() == scores.geometry)) {
    throw InvalidArgumentError("score field geometry does not match grid");
  }
  grid.addLayer(layer_name).values = scores.values;
}

}  // namespace exomap
