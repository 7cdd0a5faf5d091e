#include "exomap/localizer.hpp"

#include <cmath>
#include <fstream>

#include "exomap/errors.hpp"

namespace exomap {

std::optional<LocalizationFix> verifyAndFix(const Keyframe& query, const Keyframe& candidate,
                                            const SE3& candidate_node_pose,
                                            const VerifyConfig& config, double query_stamp) {
  const auto matches = matchDescriptors(query, candidate, config.matching);

  std::vector<Correspondence2D3D> correspondences;
  correspondences.reserve(matches.size());
  const CameraIntrinsics& k = candidate.intrinsics;
  for (const auto& m : matches) {
    const double depth = candidate.depths[static_cast<std::size_t>(m.train_index)];
    if (!std::isfinite(depth) || depth <= 0.0) continue;
    const Eigen::Vector2d& uv = candidate.keypoints[static_cast<std::size_t>(m.train_index)];
    const Eigen::Vector3d p_cam((uv.x() - k.cx) / k.fx * depth, (uv.y() - k.cy) / k.fy * depth,
                                depth);
    correspondences.push_back(
        {query.keypoints[static_cast<std::size_t>(m.query_index)], candidate_node_pose * p_cam});
  }
  if (static_cast<int>(correspondences.size()) <
      std::max(config.min_correspondences, static_cast<int>(4))) {
    return std::nullopt;
  }

  PnpResult result;
  try {
    result = pnpRansac(correspondences, query.intrinsics, config.pnp);
  } catch (const NumericalError&) {
    return std::nullopt;
  }
  if (result.mean_reprojection > config.max_mean_reproj) return std::nullopt;

  LocalizationFix fix;
  fix.matched_node = candidate.node_id;
  fix.pose = result.pose;
  fix.inlier_count = result.inlier_count;
  fix.mean_reprojection = result.mean_reprojection;
  fix.stamp = query_stamp;
  return fix;
}

MapCorrection updateCorrection(const MapCorrection& correction, const LocalizationFix& fix,
                               const SE3& odom_pose_at_fix, double odom_stamp, double window) {
  (void)correction;  // jump update: the previous correction does not blend in
  if (std::abs(fix.stamp - odom_stamp) > window) {
    throw InvalidArgumentError("stale fix: timestamps diverge beyond the association window");
  }
  MapCorrection updated;
  updated.T_map_odom = fix.pose * odom_pose_at_fix.inverse();
  updated.last_fix_stamp = fix.stamp;
  return updated;
}

SE3 localizedPose(const MapCorrection& correction, const SE3& odom_pose) {
  return correction.T_map_odom * odom_pose;
}

void writeFixLogCsv(const std::string& path, const std::vector<LocalizationFix>& fixes) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot open fix log for writing: " + path);
  os << "stamp,node,tx,ty,tz,qx,qy,qz,qw,inliers,reproj\n";
  char buf[320];
  for (const auto& f : fixes) {
    const auto& t = f.pose.translation();
    const auto& q = f.pose.rotation();
    std::snprintf(buf, sizeof(buf), "%.6f,%d,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%d,%.6g\n",
                  f.stamp, f.matched_node, t.x(), t.y(), t.z(), q.x(), q.y(), q.z(), q.w(),
                  f.inlier_count, f.mean_reprojection);
    os << buf;
  }
  if (!os) throw DataError("failed writing fix log: " + path);
}

}  // namespace exomap
