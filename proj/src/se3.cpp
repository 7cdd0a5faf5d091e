#include "exomap/se3.hpp"

#include <cmath>

namespace exomap {

namespace {

// V matrix of the SE(3) exponential: t = V * rho.
Eigen::Matrix3d leftJacobianSO3(const Eigen::Vector3d& phi) {
  const double theta = phi.norm();
  const Eigen::Matrix3d hat = skew(phi);
  if (theta < 1e-8) {
    return Eigen::Matrix3d::Identity() + 0.5 * hat + hat * hat / 6.0;
  }
  const double theta2 = theta * theta;
  const double a = (1.0 - std::cos(theta)) / theta2;
  const double b = (theta - std::sin(theta)) / (theta2 * theta);
  return Eigen::Matrix3d::Identity() + a * hat + b * hat * hat;
}

Eigen::Matrix3d leftJacobianInverseSO3(const Eigen::Vector3d& phi) {
  const double theta = phi.norm();
  const Eigen::Matrix3d hat = skew(phi);
  if (theta < 1e-8) {
    return Eigen::Matrix3d::Identity() - 0.5 * hat + hat * hat / 12.0;
  }
  const double a = std::sin(theta) / theta;
  const double b = (1.0 - std::cos(theta)) / (theta * theta);
  const double coef = (1.0 - a / (2.0 * b)) / (theta * theta);
  return Eigen::Matrix3d::Identity() - 0.5 * hat + coef * hat * hat;
}

}  // namespace

SE3 SE3::exp(const Vector6d& xi) {
  const Eigen::Vector3d rho = xi.head<3>();
  const Eigen::Vector3d phi = xi.tail<3>();
  const double theta = phi.norm();
  Eigen::Quaterniond q;
  if (theta < 1e-12) {
    q = Eigen::Quaterniond(1.0, 0.5 * phi.x(), 0.5 * phi.y(), 0.5 * phi.z());
    q.normalize();
  } else {
    q = Eigen::Quaterniond(Eigen::AngleAxisd(theta, phi / theta));
  }
  return SE3(q, leftJacobianSO3(phi) * rho);
}

Vector6d SE3::log() const {
  const Eigen::AngleAxisd aa(q_);
  const Eigen::Vector3d phi = aa.angle() * aa.axis();
  Vector6d xi;
  xi.tail<3>() = phi;
  xi.head<3>() = leftJacobianInverseSO3(phi) * t_;
  return xi;
}

}  // namespace exomap
