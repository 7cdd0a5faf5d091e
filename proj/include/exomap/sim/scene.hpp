#pragma once

#include <string>
#include <vector>

#include "exomap/sim/bvh.hpp"
#include "exomap/traversability.hpp"

namespace exomap {

struct RoomSpec {
  std::vector<Eigen::Vector2d> polygon;  // simple, any winding
  std::string class_name = "room";
  double floor_z = 0.0;
};

struct WallSpec {
  Eigen::Vector2d p0, p1;
  double height = 2.0;     // absolute top z
  double thickness = 0.1;  // meters
  double base_z = 0.0;
};

struct StairSpec {
  Eigen::Vector2d origin;  // front-center of the first riser
  double yaw = 0.0;        // ascent direction in the map frame
  double riser = 0.1;      // meters per step
  double tread = 0.3;      // depth per step
  int steps = 5;
  double width = 1.2;
  double base_z = 0.0;
};

struct BoxSpec {
  Eigen::Vector2d center;
  Eigen::Vector2d size;  // x, y extents
  double height = 0.5;   // top above base_z
  double base_z = 0.0;
};

struct SceneSpec {
  std::vector<RoomSpec> rooms;
  std::vector<WallSpec> walls;
  std::vector<StairSpec> stairs;
  std::vector<BoxSpec> boxes;
};

bool pointInPolygon(const std::vector<Eigen::Vector2d>& polygon, const Eigen::Vector2d& p);

/// Analytic world: top-surface heightfield, a consistent triangle mesh with
/// vertical faces for raycasting, and the room polygons. Deterministic in the
/// spec alone.
class Scene {
 public:
  explicit Scene(const SceneSpec& spec);

  const SceneSpec& spec() const { return spec_; }
  const TriMesh& mesh() const { return mesh_; }

  /// Top surface height: max over floors, treads, wall tops, and box tops
  /// covering (x, y) with closed boundaries; 0 where nothing covers.
  double heightAt(const Eigen::Vector2d& p) const;

  std::optional<RayHit> raycast(const Eigen::Vector3d& origin, const Eigen::Vector3d& direction,
                                double max_range) const {
    return bvh_.raycast(origin, direction, max_range);
  }

  /// Room hosting a 3D position: the containing polygon with the highest
  /// floor at or below z (small tolerance); -1 when outside all rooms.
  int roomIndexAt(const Eigen::Vector2d& p, double z) const;

  /// Heights of the surfaces somebody can stand on at (x, y): room floors,
  /// stair treads, and box tops (walls excluded). Ascending, deduplicated;
  /// empty outside all surfaces.
  std::vector<double> standingSurfacesAt(const Eigen::Vector2d& p) const;

  /// Binary traversability ground truth on a grid: positive where the true
  /// step-height analysis clears h*, from the analytic heightfield itself.
  TraversabilityMap traversabilityLabels(const GridGeometry& geometry,
                                         const TraversabilityParams& params) const;

  /// Elevation grid sampled from the analytic heightfield (testing aid).
  MultiLayerGrid sampleHeightfield(const GridGeometry& geometry) const;

 private:
  SceneSpec spec_;
  TriMesh mesh_;
  TriangleBvh bvh_;
};

Scene buildScene(const SceneSpec& spec);

}  // namespace exomap
