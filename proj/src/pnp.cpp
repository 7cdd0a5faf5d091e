#include "exomap/pnp.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <optional>

#include "exomap/errors.hpp"
#include "exomap/rng.hpp"

namespace exomap {

namespace {

constexpr std::size_t kSampleSize = 6;  // smallest well-posed linear solve

// World-to-camera transform; the public result is its inverse.
struct WorldToCamera {
  Eigen::Matrix3d rotation;
  Eigen::Vector3d translation;
};

double reprojectionError(const WorldToCamera& wtc, const CameraIntrinsics& k,
                         const Correspondence2D3D& c) {
  const Eigen::Vector3d p = wtc.rotation * c.world_point + wtc.translation;
  if (p.z() <= 1e-9) return std::numeric_limits<double>::infinity();
  const double u = k.fx * p.x() / p.z() + k.cx;
  const double v = k.fy * p.y() / p.z() + k.cy;
  return (Eigen::Vector2d(u, v) - c.image_point).norm();
}

// Direct linear transform on normalized image coordinates. Returns nullopt
// for degenerate (rank-deficient) configurations.
std::optional<WorldToCamera> solveDlt(const std::vector<Correspondence2D3D>& correspondences,
                                      const std::vector<std::size_t>& sample,
                                      const CameraIntrinsics& k) {
  // Center and scale the 3D points for conditioning.
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (std::size_t i : sample) centroid += correspondences[i].world_point;
  centroid /= static_cast<double>(sample.size());
  double spread = 0.0;
  for (std::size_t i : sample) {
    spread += (correspondences[i].world_point - centroid).norm();
  }
  spread /= static_cast<double>(sample.size());
  if (spread < 1e-9) return std::nullopt;
  const double scale = std::sqrt(3.0) / spread;

  Eigen::MatrixXd m(2 * sample.size(), 12);
  for (std::size_t row = 0; row < sample.size(); ++row) {
    const auto& c = correspondences[sample[row]];
    const Eigen::Vector3d p = scale * (c.world_point - centroid);
    const double xn = (c.image_point.x() - k.cx) / k.fx;
    const double yn = (c.image_point.y() - k.cy) / k.fy;
    m.row(2 * row) << p.x(), p.y(), p.z(), 1, 0, 0, 0, 0, -xn * p.x(), -xn * p.y(), -xn * p.z(),
        -xn;
    m.row(2 * row + 1) << 0, 0, 0, 0, p.x(), p.y(), p.z(), 1, -yn * p.x(), -yn * p.y(),
        -yn * p.z(), -yn;
  }

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  // Rank must be 11 for a unique null vector; coplanar samples fail here.
  if (sigma(10) < 1e-8 * sigma(0)) return std::nullopt;

  Eigen::Matrix<double, 12, 1> p = svd.matrixV().col(11);
  Eigen::Matrix3d a;
  a << p(0), p(1), p(2), p(4), p(5), p(6), p(8), p(9), p(10);
  Eigen::Vector3d b(p(3), p(7), p(11));

  // Majority positive depth fixes the projective sign.
  int positive = 0;
  for (std::size_t i : sample) {
    const Eigen::Vector3d q = scale * (correspondences[i].world_point - centroid);
    if (a.row(2).dot(q) + b.z() > 0.0) ++positive;
  }
  if (2 * positive < static_cast<int>(sample.size())) {
    a = -a;
    b = -b;
  }

  const Eigen::JacobiSVD<Eigen::Matrix3d> asvd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double lambda = asvd.singularValues().mean();
  if (!(lambda > 1e-12)) return std::nullopt;
  Eigen::Matrix3d rotation = asvd.matrixU() * asvd.matrixV().transpose();
  if (rotation.determinant() < 0.0) {
    rotation = asvd.matrixU() *
               Eigen::Vector3d(1, 1, -1).asDiagonal().toDenseMatrix() *
               asvd.matrixV().transpose();
  }

  // Undo the normalization. The solve returned lambda*[R/scale | R*c + t]
  // over primed points X' = scale*(X - c), with mean sigma = lambda/scale.
  WorldToCamera wtc;
  wtc.rotation = rotation;
  wtc.translation = b / (lambda * scale) - rotation * centroid;
  return wtc;
}

// Gauss-Newton on the inlier reprojection with a left-multiplicative twist on
// the world-to-camera transform.
WorldToCamera refinePose(const WorldToCamera& init, const CameraIntrinsics& k,
                         const std::vector<Correspondence2D3D>& correspondences,
                         const std::vector<bool>& mask) {
  SE3 pose(Eigen::Quaterniond(init.rotation), init.translation);

  const auto residuals = [&](const SE3& wtc, Eigen::VectorXd& r) {
    std::size_t row = 0;
    for (std::size_t i = 0; i < correspondences.size(); ++i) {
      if (!mask[i]) continue;
      const Eigen::Vector3d p = wtc * correspondences[i].world_point;
      const double z = std::max(p.z(), 1e-9);
      r(2 * row) = k.fx * p.x() / z + k.cx - correspondences[i].image_point.x();
      r(2 * row + 1) = k.fy * p.y() / z + k.cy - correspondences[i].image_point.y();
      ++row;
    }
  };

  std::size_t count = 0;
  for (bool b : mask) count += b;
  if (count < 3) return init;
  Eigen::VectorXd r(2 * count), rp(2 * count), rm(2 * count);
  Eigen::MatrixXd jac(2 * count, 6);

  residuals(pose, r);
  double cost = r.squaredNorm();
  constexpr double kStep = 1e-7;
  for (int iter = 0; iter < 25; ++iter) {
    for (int col = 0; col < 6; ++col) {
      Vector6d delta = Vector6d::Zero();
      delta[col] = kStep;
      residuals(SE3::exp(delta) * pose, rp);
      delta[col] = -kStep;
      residuals(SE3::exp(delta) * pose, rm);
      jac.col(col) = (rp - rm) / (2.0 * kStep);
    }
    const Matrix6d h = jac.transpose() * jac + 1e-12 * Matrix6d::Identity();
    const Vector6d step = h.ldlt().solve(-jac.transpose() * r);
    if (!step.allFinite() || step.norm() < 1e-15) break;
    const SE3 candidate = SE3::exp(step) * pose;
    residuals(candidate, rp);
    const double candidate_cost = rp.squaredNorm();
    if (candidate_cost >= cost) break;
    pose = candidate;
    r = rp;
    const bool converged = (cost - candidate_cost) < 1e-14 * std::max(cost, 1e-20);
    cost = candidate_cost;
    if (converged) break;
  }

  WorldToCamera out;
  out.rotation = pose.rotationMatrix();
  out.translation = pose.translation();
  return out;
}

}  // namespace

bool projectPoint(const SE3& camera_pose, const CameraIntrinsics& intrinsics,
                  const Eigen::Vector3d& world_point, Eigen::Vector2d& pixel) {
  const Eigen::Vector3d p = camera_pose.inverse() * world_point;
  if (p.z() <= 1e-9) return false;
  pixel.x() = intrinsics.fx * p.x() / p.z() + intrinsics.cx;
  pixel.y() = intrinsics.fy * p.y() / p.z() + intrinsics.cy;
  return true;
}

PnpResult pnpRansac(const std::vector<Correspondence2D3D>& correspondences,
                    const CameraIntrinsics& intrinsics, const PnpConfig& config) {
  if (correspondences.size() < 4) {
    throw InvalidArgumentError("pnpRansac needs at least 4 correspondences");
  }
  const std::size_t n = correspondences.size();

  Rng rng(Rng::deriveSeed(config.seed, 0x9e5));
  std::optional<WorldToCamera> best;
  int best_count = 0;
  double best_mean = std::numeric_limits<double>::infinity();

  if (n >= kSampleSize) {
    std::vector<std::size_t> sample(kSampleSize);
    for (int iter = 0; iter < config.iterations; ++iter) {
      // Draw distinct indices.
      for (std::size_t s = 0; s < kSampleSize; ++s) {
        bool fresh = true;
        do {
          sample[s] = rng.uniformInt(n);
          fresh = true;
          for (std::size_t t = 0; t < s; ++t) fresh &= (sample[t] != sample[s]);
        } while (!fresh);
      }
      const auto model = solveDlt(correspondences, sample, intrinsics);
      if (!model) continue;

      int count = 0;
      double err_sum = 0.0;
      for (const auto& c : correspondences) {
        const double e = reprojectionError(*model, intrinsics, c);
        if (e <= config.reproj_threshold) {
          ++count;
          err_sum += e;
        }
      }
      if (count > best_count ||
          (count == best_count && count > 0 && err_sum / count < best_mean)) {
        best = model;
        best_count = count;
        best_mean = count > 0 ? err_sum / count : best_mean;
      }
    }
  }

  if (!best || best_count < std::max(config.min_inliers, 3)) {
    throw NumericalError("pnpRansac found no consensus (" + std::to_string(best_count) +
                         " inliers, need " + std::to_string(config.min_inliers) + ")");
  }

  // Two refine/reclassify rounds, then a final mask so the inlier invariant
  // (reprojection <= threshold under the returned pose) holds exactly.
  WorldToCamera model = *best;
  std::vector<bool> mask(n, false);
  for (int round = 0; round < 2; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      mask[i] = reprojectionError(model, intrinsics, correspondences[i]) <=
                config.reproj_threshold;
    }
    model = refinePose(model, intrinsics, correspondences, mask);
  }

  PnpResult result;
  result.inlier_mask.assign(n, false);
  double err_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = reprojectionError(model, intrinsics, correspondences[i]);
    if (e <= config.reproj_threshold) {
      result.inlier_mask[i] = true;
      ++result.inlier_count;
      err_sum += e;
    }
  }
  if (result.inlier_count < config.min_inliers) {
    throw NumericalError("pnpRansac consensus collapsed after refinement");
  }
  result.mean_reprojection = err_sum / result.inlier_count;
  const SE3 world_to_camera(Eigen::Quaterniond(model.rotation), model.translation);
  result.pose = world_to_camera.inverse();
  return result;
}

}  // namespace exomap
