#pragma once

#include <cstdint>
#include <vector>

#include "exomap/keyframe.hpp"
#include "exomap/se3.hpp"

namespace exomap {

struct Correspondence2D3D {
  Eigen::Vector2d image_point;  // pixels
  Eigen::Vector3d world_point;  // map frame, meters
};

struct PnpConfig {
  int iterations = 500;
  double reproj_threshold = 3.0;  // pixels
  int min_inliers = 15;
  std::uint64_t seed = 0;
};

struct PnpResult {
  SE3 pose;  // camera in map frame
  std::vector<bool> inlier_mask;
  int inlier_count = 0;
  double mean_reprojection = 0.0;  // pixels, over inliers
};

/// Projects a map point into a camera at `camera_pose` (camera-in-map).
/// Returns false when the point is behind the camera.
bool projectPoint(const SE3& camera_pose, const CameraIntrinsics& intrinsics,
                  const Eigen::Vector3d& world_point, Eigen::Vector2d& pixel);

/// RANSAC camera-pose recovery from 2D-3D correspondences.
///
/// Minimal samples solve a linear DLT for [R|t]; the projective solution is
/// projected back onto SE(3) and the best consensus model is refined by
/// nonlinear least squares on its inliers. Near-singular samples (coplanar or
/// otherwise degenerate) fail a conditioning check and are redrawn.
///
/// Throws InvalidArgumentError for fewer than 4 correspondences and
/// NumericalError when no model reaches min_inliers. Note the linear solve
/// needs 6 points, so inputs of size 4-5 cannot reach a consensus.
PnpResult pnpRansac(const std::vector<Correspondence2D3D>& correspondences,
                    const CameraIntrinsics& intrinsics, const PnpConfig& config = {});

}  // namespace exomap
