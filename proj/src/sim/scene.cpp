#include "exomap/sim/scene.hpp"

#include <Eigen/Geometry>
#include <cmath>

#include "exomap/errors.hpp"

namespace exomap {

namespace {

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

// Squared distance from p to segment [a, b].
double segmentDistanceSq(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                         const Eigen::Vector2d& b) {
  const Eigen::Vector2d ab = b - a;
  const double len_sq = ab.squaredNorm();
  if (len_sq < 1e-18) return (p - a).squaredNorm();
  const double t = std::clamp((p - a).dot(ab) / len_sq, 0.0, 1.0);
  return (p - (a + t * ab)).squaredNorm();
}

// Ear-clipping triangulation of a simple polygon (indices into `points`).
std::vector<std::array<int, 3>> earClip(std::vector<Eigen::Vector2d> points) {
  // Enforce CCW winding.
  double area2 = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    area2 += cross2(points[i], points[(i + 1) % points.size()]);
  }
  std::vector<int> index(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) index[i] = static_cast<int>(i);
  if (area2 < 0.0) std::reverse(index.begin(), index.end());

  std::vector<std::array<int, 3>> triangles;
  while (index.size() > 3) {
    bool clipped = false;
    for (std::size_t i = 0; i < index.size(); ++i) {
      const int ia = index[(i + index.size() - 1) % index.size()];
      const int ib = index[i];
      const int ic = index[(i + 1) % index.size()];
      const Eigen::Vector2d& a = points[static_cast<std::size_t>(ia)];
      const Eigen::Vector2d& b = points[static_cast<std::size_t>(ib)];
      const Eigen::Vector2d& c = points[static_cast<std::size_t>(ic)];
      if (cross2(b - a, c - a) <= 1e-12) continue;  // reflex or degenerate
      bool contains_other = false;
      for (int other : index) {
        if (other == ia || other == ib || other == ic) continue;
        const Eigen::Vector2d& p = points[static_cast<std::size_t>(other)];
        const double d0 = cross2(b - a, p - a);
        const double d1 = cross2(c - b, p - b);
        const double d2 = cross2(a - c, p - c);
        if (d0 >= -1e-12 && d1 >= -1e-12 && d2 >= -1e-12) {
          contains_other = true;
          break;
        }
      }
      if (contains_other) continue;
      triangles.push_back({ia, ib, ic});
      index.erase(index.begin() + static_cast<std::ptrdiff_t>(i));
      clipped = true;
      break;
    }
    if (!clipped) throw InvalidArgumentError("polygon triangulation failed (non-simple polygon?)");
  }
  triangles.push_back({index[0], index[1], index[2]});
  return triangles;
}

void appendHorizontalPolygon(TriMesh& mesh, const std::vector<Eigen::Vector2d>& polygon,
                             double z) {
  const int base = static_cast<int>(mesh.vertices.size());
  for (const auto& p : polygon) mesh.vertices.emplace_back(p.x(), p.y(), z);
  for (const auto& tri : earClip(polygon)) {
    mesh.triangles.push_back({base + tri[0], base + tri[1], base + tri[2]});
  }
}

// Quad from four corners (two triangles), winding as given.
void appendQuad(TriMesh& mesh, const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                const Eigen::Vector3d& c, const Eigen::Vector3d& d) {
  const int base = static_cast<int>(mesh.vertices.size());
  mesh.vertices.push_back(a);
  mesh.vertices.push_back(b);
  mesh.vertices.push_back(c);
  mesh.vertices.push_back(d);
  mesh.triangles.push_back({base, base + 1, base + 2});
  mesh.triangles.push_back({base, base + 2, base + 3});
}

// Vertical prism sides over a (convex, CCW) footprint from z0 to z1.
void appendSides(TriMesh& mesh, const std::vector<Eigen::Vector2d>& footprint, double z0,
                 double z1) {
  for (std::size_t i = 0; i < footprint.size(); ++i) {
    const Eigen::Vector2d& p = footprint[i];
    const Eigen::Vector2d& q = footprint[(i + 1) % footprint.size()];
    appendQuad(mesh, {p.x(), p.y(), z0}, {q.x(), q.y(), z0}, {q.x(), q.y(), z1},
               {p.x(), p.y(), z1});
  }
}

std::vector<Eigen::Vector2d> wallFootprint(const WallSpec& wall) {
  Eigen::Vector2d dir = wall.p1 - wall.p0;
  const double len = dir.norm();
  if (len < 1e-12) throw InvalidArgumentError("wall segment has zero length");
  dir /= len;
  const Eigen::Vector2d normal(-dir.y(), dir.x());
  const Eigen::Vector2d off = 0.5 * wall.thickness * normal;
  return {wall.p0 - off, wall.p1 - off, wall.p1 + off, wall.p0 + off};
}

Eigen::Vector2d stairLocal(const StairSpec& stair, const Eigen::Vector2d& p) {
  const Eigen::Vector2d d = p - stair.origin;
  const double c = std::cos(stair.yaw), s = std::sin(stair.yaw);
  return {c * d.x() + s * d.y(), -s * d.x() + c * d.y()};
}

Eigen::Vector2d stairWorld(const StairSpec& stair, const Eigen::Vector2d& local) {
  const double c = std::cos(stair.yaw), s = std::sin(stair.yaw);
  return stair.origin + Eigen::Vector2d(c * local.x() - s * local.y(),
                                        s * local.x() + c * local.y());
}

}  // namespace

bool pointInPolygon(const std::vector<Eigen::Vector2d>& polygon, const Eigen::Vector2d& p) {
  // Crossing count with closed boundaries (boundary points count as inside).
  bool inside = false;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Eigen::Vector2d& a = polygon[j];
    const Eigen::Vector2d& b = polygon[i];
    if (segmentDistanceSq(p, a, b) < 1e-18) return true;
    const bool crosses = (b.y() > p.y()) != (a.y() > p.y());
    if (crosses) {
      const double x = b.x() + (p.y() - b.y()) * (a.x() - b.x()) / (a.y() - b.y());
      if (p.x() < x) inside = !inside;
    }
  }
  return inside;
}

Scene::Scene(const SceneSpec& spec) : spec_(spec) {
  for (const auto& room : spec.rooms) {
    if (room.polygon.size() < 3) throw InvalidArgumentError("room polygon needs >= 3 vertices");
  }
  for (const auto& stair : spec.stairs) {
    if (stair.riser <= 0 || stair.tread <= 0 || stair.width <= 0 || stair.steps < 1) {
      throw InvalidArgumentError("stair riser/tread/width/steps must be positive");
    }
  }
  for (const auto& box : spec.boxes) {
    if (box.size.x() <= 0 || box.size.y() <= 0 || box.height <= 0) {
      throw InvalidArgumentError("box size and height must be positive");
    }
  }

  // Floors.
  for (const auto& room : spec.rooms) appendHorizontalPolygon(mesh_, room.polygon, room.floor_z);

  // Staircases: treads, risers, and side skirts.
  for (const auto& stair : spec.stairs) {
    const double hw = 0.5 * stair.width;
    for (int k = 0; k < stair.steps; ++k) {
      const double x0 = k * stair.tread;
      const double x1 = (k + 1) * stair.tread;
      const double z_lo = stair.base_z + k * stair.riser;
      const double z_hi = stair.base_z + (k + 1) * stair.riser;
      const Eigen::Vector2d c00 = stairWorld(stair, {x0, -hw});
      const Eigen::Vector2d c01 = stairWorld(stair, {x0, hw});
      const Eigen::Vector2d c10 = stairWorld(stair, {x1, -hw});
      const Eigen::Vector2d c11 = stairWorld(stair, {x1, hw});
      // Tread at z_hi.
      appendQuad(mesh_, {c00.x(), c00.y(), z_hi}, {c10.x(), c10.y(), z_hi},
                 {c11.x(), c11.y(), z_hi}, {c01.x(), c01.y(), z_hi});
      // Riser at the front edge, from z_lo up to z_hi.
      appendQuad(mesh_, {c00.x(), c00.y(), z_lo}, {c01.x(), c01.y(), z_lo},
                 {c01.x(), c01.y(), z_hi}, {c00.x(), c00.y(), z_hi});
      // Side skirts.
      appendQuad(mesh_, {c00.x(), c00.y(), stair.base_z}, {c10.x(), c10.y(), stair.base_z},
                 {c10.x(), c10.y(), z_hi}, {c00.x(), c00.y(), z_hi});
      appendQuad(mesh_, {c01.x(), c01.y(), stair.base_z}, {c11.x(), c11.y(), stair.base_z},
                 {c11.x(), c11.y(), z_hi}, {c01.x(), c01.y(), z_hi});
    }
  }

  // Walls and boxes: top face + sides.
  for (const auto& wall : spec.walls) {
    const auto footprint = wallFootprint(wall);
    appendHorizontalPolygon(mesh_, footprint, wall.height);
    appendSides(mesh_, footprint, wall.base_z, wall.height);
  }
  for (const auto& box : spec.boxes) {
    const Eigen::Vector2d h = 0.5 * box.size;
    const std::vector<Eigen::Vector2d> footprint{
        box.center + Eigen::Vector2d(-h.x(), -h.y()), box.center + Eigen::Vector2d(h.x(), -h.y()),
        box.center + Eigen::Vector2d(h.x(), h.y()), box.center + Eigen::Vector2d(-h.x(), h.y())};
    appendHorizontalPolygon(mesh_, footprint, box.base_z + box.height);
    appendSides(mesh_, footprint, box.base_z, box.base_z + box.height);
  }

  bvh_ = TriangleBvh(mesh_);
}

double Scene::heightAt(const Eigen::Vector2d& p) const {
  double h = 0.0;
  bool covered = false;
  for (const auto& room : spec_.rooms) {
    if (pointInPolygon(room.polygon, p)) {
      h = covered ? std::max(h, room.floor_z) : room.floor_z;
      covered = true;
    }
  }
  for (const auto& stair : spec_.stairs) {
    const Eigen::Vector2d local = stairLocal(stair, p);
    if (std::abs(local.y()) > 0.5 * stair.width) continue;
    if (local.x() < 0.0 || local.x() > stair.steps * stair.tread) continue;
    const int step = std::min(stair.steps - 1, static_cast<int>(local.x() / stair.tread));
    const double z = stair.base_z + (step + 1) * stair.riser;
    h = covered ? std::max(h, z) : z;
    covered = true;
  }
  for (const auto& wall : spec_.walls) {
    if (segmentDistanceSq(p, wall.p0, wall.p1) <= 0.25 * wall.thickness * wall.thickness) {
      h = covered ? std::max(h, wall.height) : wall.height;
      covered = true;
    }
  }
  for (const auto& box : spec_.boxes) {
    if (std::abs(p.x() - box.center.x()) <= 0.5 * box.size.x() &&
        std::abs(p.y() - box.center.y()) <= 0.5 * box.size.y()) {
      const double z = box.base_z + box.height;
      h = covered ? std::max(h, z) : z;
      covered = true;
    }
  }
  return h;
}

std::vector<double> Scene::standingSurfacesAt(const Eigen::Vector2d& p) const {
  std::vector<double> heights;
  for (const auto& room : spec_.rooms) {
    if (pointInPolygon(room.polygon, p)) heights.push_back(room.floor_z);
  }
  for (const auto& stair : spec_.stairs) {
    const Eigen::Vector2d local = stairLocal(stair, p);
    if (std::abs(local.y()) > 0.5 * stair.width) continue;
    if (local.x() < 0.0 || local.x() > stair.steps * stair.tread) continue;
    const int step = std::min(stair.steps - 1, static_cast<int>(local.x() / stair.tread));
    heights.push_back(stair.base_z + (step + 1) * stair.riser);
  }
  for (const auto& box : spec_.boxes) {
    if (std::abs(p.x() - box.center.x()) <= 0.5 * box.size.x() &&
        std::abs(p.y() - box.center.y()) <= 0.5 * box.size.y()) {
      heights.push_back(box.base_z + box.height);
    }
  }
  std::sort(heights.begin(), heights.end());
  heights.erase(std::unique(heights.begin(), heights.end()), heights.end());
  return heights;
}

int Scene::roomIndexAt(const Eigen::Vector2d& p, double z) const {
  int best = -1;
  double best_floor = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < spec_.rooms.size(); ++i) {
    const auto& room = spec_.rooms[i];
    if (room.floor_z > z + 0.5) continue;  // above the query
    if (!pointInPolygon(room.polygon, p)) continue;
    if (room.floor_z > best_floor) {
      best_floor = room.floor_z;
      best = static_cast<int>(i);
    }
  }
  return best;
}

TraversabilityMap Scene::traversabilityLabels(const GridGeometry& geometry,
                                              const TraversabilityParams& params) const {
  const MultiLayerGrid truth = sampleHeightfield(geometry);
  TraversabilityMap labels(geometry);
  const TraversabilityParams label_params = params;
  const TraversabilityMap scores = scoreMap(truth, label_params);
  for (std::size_t i = 0; i < scores.values.size(); ++i) {
    if (!isKnown(scores.values[i])) continue;
    labels.values[i] = scores.values[i] > 0.0 ? 1.0 : 0.0;
  }
  return labels;
}

MultiLayerGrid Scene::sampleHeightfield(const GridGeometry& geometry) const {
  MultiLayerGrid grid(geometry, "map");
  Layer& elevation = grid.layer("elevation");
  for (int r = 0; r < geometry.rows(); ++r) {
    for (int c = 0; c < geometry.cols(); ++c) {
      elevation.values[geometry.linearIndex({r, c})] = heightAt(geometry.cellToWorld({r, c}));
    }
  }
  return grid;
}

Scene buildScene(const SceneSpec& spec) { return Scene(spec); }

}  // namespace exomap
