#pragma once

#include <string>
#include <vector>

#include "exomap/se3.hpp"

namespace exomap {

struct StampedPose {
  double stamp = 0.0;
  SE3 pose;
};

/// Timestamped SE(3) pose sequence with strictly increasing stamps.
struct Trajectory {
  std::vector<StampedPose> entries;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
  const StampedPose& operator[](std::size_t i) const { return entries[i]; }

  void append(double stamp, const SE3& pose);

  /// Index of the entry with stamp nearest to t (ties toward the earlier one).
  std::size_t nearestIndex(double t) const;
};

/// TUM format: one "stamp tx ty tz qx qy qz qw" line per pose, '#' comments.
Trajectory readTumTrajectory(const std::string& path);
void writeTumTrajectory(const std::string& path, const Trajectory& traj);

}  // namespace exomap
