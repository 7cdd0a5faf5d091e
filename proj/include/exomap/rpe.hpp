#pragma once

#include "exomap/trajectory.hpp"

namespace exomap {

struct RpeResult {
  double distance = 0.0;          // pairing distance in meters
  double translation_rmse = 0.0;  // meters
  double rotation_rmse = 0.0;     // degrees
  std::size_t pair_count = 0;
};

/// Relative pose error over a fixed traveled distance.
///
/// Trajectories associate by nearest stamp within `association_window`
/// (seconds). For each associated start pose the first later ground-truth
/// pose at path distance >= d forms a pair; the error is
/// delta = (gt_i^-1 gt_j)^-1 (est_i^-1 est_j), reported as RMSE over
/// translation norms and geodesic rotation angles (degrees). Invariant to a
/// rigid transform applied to either trajectory.
RpeResult rpe(const Trajectory& est, const Trajectory& gt, double distance,
              double association_window = 0.02);

}  // namespace exomap
