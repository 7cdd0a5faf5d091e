#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace exomap {

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

/// Rigid-body transform in 3D stored as unit quaternion + translation.
///
/// Twist convention: xi = [rho, phi] with the translational part first.
/// Frames are z-up, translations in meters.
class SE3 {
 public:
  SE3() : q_(Eigen::Quaterniond::Identity()), t_(Eigen::Vector3d::Zero()) {}

  SE3(const Eigen::Quaterniond& q, const Eigen::Vector3d& t) : q_(q.normalized()), t_(t) {}

  SE3(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& t)
      : q_(Eigen::Quaterniond(rotation).normalized()), t_(t) {}

  static SE3 Identity() { return SE3(); }

  static SE3 fromTranslation(double x, double y, double z) {
    return SE3(Eigen::Quaterniond::Identity(), Eigen::Vector3d(x, y, z));
  }

  static SE3 rotZ(double angle) {
    return SE3(Eigen::Quaterniond(Eigen::AngleAxisd(angle, Eigen::Vector3d::UnitZ())),
               Eigen::Vector3d::Zero());
  }

  static SE3 rotY(double angle) {
    return SE3(Eigen::Quaterniond(Eigen::AngleAxisd(angle, Eigen::Vector3d::UnitY())),
               Eigen::Vector3d::Zero());
  }

  static SE3 rotX(double angle) {
    return SE3(Eigen::Quaterniond(Eigen::AngleAxisd(angle, Eigen::Vector3d::UnitX())),
               Eigen::Vector3d::Zero());
  }

  const Eigen::Quaterniond& rotation() const { return q_; }
  const Eigen::Vector3d& translation() const { return t_; }
  Eigen::Vector3d& translation() { return t_; }
  Eigen::Matrix3d rotationMatrix() const { return q_.toRotationMatrix(); }

  SE3 inverse() const {
    // Conjugation preserves the unit norm; assign members directly so the
    // stored rotation and the rotated translation use the same quaternion.
    SE3 out;
    out.q_ = q_.conjugate();
    out.t_ = out.q_ * (-t_);
    return out;
  }

  SE3 operator*(const SE3& other) const { return SE3(q_ * other.q_, q_ * other.t_ + t_); }

  /// Transforms a point.
  Eigen::Vector3d operator*(const Eigen::Vector3d& p) const { return q_ * p + t_; }

  /// Geodesic rotation angle in [0, pi].
  double rotationAngle() const { return Eigen::AngleAxisd(q_).angle(); }

  /// Exponential map. xi = [rho, phi].
  static SE3 exp(const Vector6d& xi);

  /// Logarithm map, inverse of exp. Returns [rho, phi].
  Vector6d log() const;

  /// Left-multiplicative retraction: exp(xi) * this.
  SE3 retract(const Vector6d& xi) const { return exp(xi) * (*this); }

  bool isApprox(const SE3& other, double tol = 1e-12) const {
    return (t_ - other.t_).norm() <= tol &&
           ((q_.coeffs() - other.q_.coeffs()).norm() <= tol ||
            (q_.coeffs() + other.q_.coeffs()).norm() <= tol);
  }

 private:
  Eigen::Quaterniond q_;
  Eigen::Vector3d t_;
};

inline Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d m;
  m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return m;
}

}  // namespace exomap
