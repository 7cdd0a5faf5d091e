#pragma once

#include <optional>
#include <string>
#include <vector>

#include "exomap/matching.hpp"
#include "exomap/pnp.hpp"

namespace exomap {

struct LocalizationFix {
  int matched_node = -1;
  SE3 pose;  // camera in map frame
  int inlier_count = 0;
  double mean_reprojection = 0.0;  // pixels
  double stamp = 0.0;
};

struct VerifyConfig {
  MatchingConfig matching;
  PnpConfig pnp;
  int min_correspondences = 10;   // matched keypoints with depth needed to try
  double max_mean_reproj = 2.0;   // pixels, acceptance gate on the fix
};

/// Geometric verification of a place candidate: matched candidate keypoints
/// lift to 3D through their depth and the candidate node pose, then RANSAC
/// PnP estimates the query camera pose. Absence of a fix is a normal outcome
/// (too few matches, no consensus, or a weak fix), reported as nullopt.
std::optional<LocalizationFix> verifyAndFix(const Keyframe& query, const Keyframe& candidate,
                                            const SE3& candidate_node_pose,
                                            const VerifyConfig& config = {},
                                            double query_stamp = 0.0);

/// Discrete map-from-odom correction maintained between relocalizations.
struct MapCorrection {
  SE3 T_map_odom;
  double last_fix_stamp = -1.0;  // negative until the first fix

  bool initialized() const { return last_fix_stamp >= 0.0; }
};

/// Jump update: T_map_odom = fix.pose * odom_pose_at_fix^-1. The fix and the
/// odometry pose must agree in time within `window` seconds.
MapCorrection updateCorrection(const MapCorrection& correction, const LocalizationFix& fix,
                               const SE3& odom_pose_at_fix, double odom_stamp,
                               double window = 0.5);

/// Continuous map-frame estimate: T_map_odom * odom_pose.
SE3 localizedPose(const MapCorrection& correction, const SE3& odom_pose);

/// Fix log CSV: stamp,node,tx,ty,tz,qx,qy,qz,qw,inliers,reproj
void writeFixLogCsv(const std::string& path, const std::vector<LocalizationFix>& fixes);

}  // namespace exomap
