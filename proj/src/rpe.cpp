#include "exomap/rpe.hpp"

#include <cmath>
#include <vector>

#include "exomap/errors.hpp"

namespace exomap {

RpeResult rpe(const Trajectory& est, const Trajectory& gt, double distance,
              double association_window) {
  if (est.empty() || gt.empty()) throw InvalidArgumentError("rpe needs non-empty trajectories");
  if (distance <= 0.0) throw InvalidArgumentError("rpe pairing distance must be > 0");

  // Associate each ground-truth pose with the nearest estimate in time.
  std::vector<SE3> gt_poses, est_poses;
  for (const auto& g : gt.entries) {
    const std::size_t j = est.nearestIndex(g.stamp);
    if (std::abs(est.entries[j].stamp - g.stamp) > association_window) continue;
    gt_poses.push_back(g.pose);
    est_poses.push_back(est.entries[j].pose);
  }
  if (gt_poses.size() < 2) {
    throw InvalidArgumentError("rpe association failed: no overlapping stamps");
  }

  // Cumulative ground-truth path length over the associated sequence.
  std::vector<double> cumulative(gt_poses.size(), 0.0);
  for (std::size_t i = 1; i < gt_poses.size(); ++i) {
    cumulative[i] =
        cumulative[i - 1] + (gt_poses[i].translation() - gt_poses[i - 1].translation()).norm();
  }
  if (cumulative.back() < distance) {
    throw InvalidArgumentError("trajectory shorter than the rpe pairing distance");
  }

  double trans_sq = 0.0;
  double rot_sq = 0.0;
  std::size_t pairs = 0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < gt_poses.size(); ++i) {
    if (j < i + 1) j = i + 1;
    while (j < gt_poses.size() && cumulative[j] - cumulative[i] < distance) ++j;
    if (j >= gt_poses.size()) break;

    const SE3 gt_rel = gt_poses[i].inverse() * gt_poses[j];
    const SE3 est_rel = est_poses[i].inverse() * est_poses[j];
    // delta = gt_rel^-1 * est_rel. Its translation norm equals the plain
    // difference of the relative translations (rotations preserve norms),
    // which is exact when the trajectories coincide.
    trans_sq += (est_rel.translation() - gt_rel.translation()).squaredNorm();
    const Eigen::Quaterniond dq = gt_rel.rotation().conjugate() * est_rel.rotation();
    const double angle = 2.0 * std::atan2(dq.vec().norm(), std::abs(dq.w()));
    rot_sq += angle * angle;
    ++pairs;
  }
  if (pairs == 0) throw InvalidArgumentError("no rpe pairs at the requested distance");

  RpeResult result;
  result.distance = distance;
  result.translation_rmse = std::sqrt(trans_sq / static_cast<double>(pairs));
  result.rotation_rmse = std::sqrt(rot_sq / static_cast<double>(pairs)) * 180.0 / M_PI;
  result.pair_count = pairs;
  return result;
}

}  // namespace exomap
