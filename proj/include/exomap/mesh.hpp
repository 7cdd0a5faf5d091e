#pragma once

#include <array>
#include <string>
#include <vector>

#include "exomap/cloud.hpp"
#include "exomap/grid.hpp"

namespace exomap {

struct TriMesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> triangles;

  double triangleArea(std::size_t t) const;
  double surfaceArea() const;
  Eigen::Vector3d triangleNormal(std::size_t t) const;
};

/// Triangulates the elevation layer: two triangles per quad of four known
/// neighboring cells, vertices at cell centers, CCW seen from +z. Quads with
/// any unknown corner are skipped. Throws when no complete quad exists.
TriMesh heightmapToMesh(const MultiLayerGrid& grid);

/// Removes triangles whose surface normal tilts more than max_angle from
/// vertical (near-vertical walls/risers for the reconstruction metric).
TriMesh filterSteepTriangles(const TriMesh& mesh, double max_angle);

/// Uniform surface sampling: per triangle round(area * density) points with a
/// seeded stochastic remainder, positions via barycentric sampling.
PointCloud sampleMesh(const TriMesh& mesh, double density, std::uint64_t seed = 0);

/// ASCII PLY export for inspection.
void writePlyMesh(const std::string& path, const TriMesh& mesh);

}  // namespace exomap
