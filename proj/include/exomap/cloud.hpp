#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace exomap {

/// 3D point set with optional per-point measurement std deviations.
struct PointCloud {
  std::vector<Eigen::Vector3d> points;
  std::vector<double> sigmas;  // empty, or one std per point (> 0)
  std::string frame = "sensor";
  double stamp = 0.0;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

/// Reads x/y/z float properties from an ASCII or binary-little-endian PLY.
PointCloud readPlyCloud(const std::string& path);

/// Writes a binary-little-endian PLY with x/y/z float properties.
void writePlyCloud(const std::string& path, const PointCloud& cloud, bool ascii = false);

}  // namespace exomap
