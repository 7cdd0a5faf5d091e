#include "exomap/mesh.hpp"

#include <Eigen/Geometry>
#include <cmath>
#include <fstream>

#include "exomap/errors.hpp"
#include "exomap/rng.hpp"

namespace exomap {

double TriMesh::triangleArea(std::size_t t) const {
  const auto& tri = triangles[t];
  const Eigen::Vector3d& a = vertices[static_cast<std::size_t>(tri[0])];
  const Eigen::Vector3d& b = vertices[static_cast<std::size_t>(tri[1])];
  const Eigen::Vector3d& c = vertices[static_cast<std::size_t>(tri[2])];
  return 0.5 * (b - a).cross(c - a).norm();
}

double TriMesh::surfaceArea() const {
  double area = 0.0;
  for (std::size_t t = 0; t < triangles.size(); ++t) area += triangleArea(t);
  return area;
}

Eigen::Vector3d TriMesh::triangleNormal(std::size_t t) const {
  const auto& tri = triangles[t];
  const Eigen::Vector3d& a = vertices[static_cast<std::size_t>(tri[0])];
  const Eigen::Vector3d& b = vertices[static_cast<std::size_t>(tri[1])];
  const Eigen::Vector3d& c = vertices[static_cast<std::size_t>(tri[2])];
  return (b - a).cross(c - a).normalized();
}

TriMesh heightmapToMesh(const MultiLayerGrid& grid) {
  const GridGeometry& g = grid.geometry();
  const Layer& elevation = grid.layer("elevation");

  TriMesh mesh;
  std::vector<int> vertex_of(g.cellCount(), -1);
  const auto vertexFor = [&](const CellIndex& c) {
    const std::size_t idx = g.linearIndex(c);
    if (vertex_of[idx] < 0) {
      const Eigen::Vector2d xy = g.cellToWorld(c);
      vertex_of[idx] = static_cast<int>(mesh.vertices.size());
      mesh.vertices.emplace_back(xy.x(), xy.y(), elevation.values[idx]);
    }
    return vertex_of[idx];
  };

  for (int r = 0; r + 1 < g.rows(); ++r) {
    for (int c = 0; c + 1 < g.cols(); ++c) {
      const CellIndex q00{r, c}, q01{r, c + 1}, q11{r + 1, c + 1}, q10{r + 1, c};
      if (!isKnown(elevation.values[g.linearIndex(q00)]) ||
          !isKnown(elevation.values[g.linearIndex(q01)]) ||
          !isKnown(elevation.values[g.linearIndex(q11)]) ||
          !isKnown(elevation.values[g.linearIndex(q10)])) {
        continue;
      }
      const int v00 = vertexFor(q00);
      const int v01 = vertexFor(q01);
      const int v11 = vertexFor(q11);
      const int v10 = vertexFor(q10);
      mesh.triangles.push_back({v00, v01, v11});
      mesh.triangles.push_back({v00, v11, v10});
    }
  }
  if (mesh.triangles.empty()) {
    throw InvalidArgumentError("no 2x2 block of known cells to triangulate");
  }
  return mesh;
}

TriMesh filterSteepTriangles(const TriMesh& mesh, double max_angle) {
  TriMesh out;
  out.vertices = mesh.vertices;
  const double min_cos = std::cos(max_angle);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const double up = std::abs(mesh.triangleNormal(t).z());
    if (up >= min_cos) out.triangles.push_back(mesh.triangles[t]);
  }
  return out;
}

PointCloud sampleMesh(const TriMesh& mesh, double density, std::uint64_t seed) {
  if (density <= 0.0) throw InvalidArgumentError("sampling density must be > 0");
  Rng rng(Rng::deriveSeed(seed, 0x5a3c));
  PointCloud cloud;
  cloud.frame = "map";

  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const double expected = mesh.triangleArea(t) * density;
    std::size_t count = static_cast<std::size_t>(std::floor(expected));
    if (rng.uniform() < expected - static_cast<double>(count)) ++count;

    const auto& tri = mesh.triangles[t];
    const Eigen::Vector3d& a = mesh.vertices[static_cast<std::size_t>(tri[0])];
    const Eigen::Vector3d& b = mesh.vertices[static_cast<std::size_t>(tri[1])];
    const Eigen::Vector3d& c = mesh.vertices[static_cast<std::size_t>(tri[2])];
    for (std::size_t k = 0; k < count; ++k) {
      double u = rng.uniform();
      double v = rng.uniform();
      if (u + v > 1.0) {
        u = 1.0 - u;
        v = 1.0 - v;
      }
      cloud.points.emplace_back(a + u * (b - a) + v * (c - a));
    }
  }
  return cloud;
}

void writePlyMesh(const std::string& path, const TriMesh& mesh) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot open mesh file for writing: " + path);
  os << "ply\nformat ascii 1.0\n";
  os << "element vertex " << mesh.vertices.size() << "\n";
  os << "property float x\nproperty float y\nproperty float z\n";
  os << "element face " << mesh.triangles.size() << "\n";
  os << "property list uchar int vertex_indices\nend_header\n";
  char buf[128];
  for (const auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof(buf), "%.9g %.9g %.9g\n", v.x(), v.y(), v.z());
    os << buf;
  }
  for (const auto& t : mesh.triangles) {
    os << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
  }
  if (!os) throw DataError("failed writing mesh file: " + path);
}

}  // namespace exomap
