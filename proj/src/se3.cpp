#include "lieadapt/se3.hpp"

#include <Eigen/LU>
#include <cmath>
#include <numbers>
#include <string>

namespace lieadapt {

namespace {

// sin(t)/t, (1-cos t)/t^2, (t-sin t)/t^3 with Taylor branches near zero.
struct RodriguesCoeffs {
  double a;
  double b;
  double c;
};

RodriguesCoeffs rodrigues_coeffs(double theta) {
  if (theta < kSmallAngle) {
    const double t2 = theta * theta;
    const double t4 = t2 * t2;
    return {1.0 - t2 / 6.0 + t4 / 120.0, 0.5 - t2 / 24.0 + t4 / 720.0,
            1.0 / 6.0 - t2 / 120.0 + t4 / 5040.0};
  }
  const double s = std::sin(theta);
  const double half = std::sin(0.5 * theta);
  const double t2 = theta * theta;
  return {s / theta, 2.0 * half * half / t2, (theta - s) / (t2 * theta)};
}

Vec3 skew_part_vee(const Mat3& r) {
  return 0.5 * Vec3(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
}

}  // namespace

BranchCutError::BranchCutError(double angle)
    : std::domain_error("log map: rotation angle " + std::to_string(angle) +
                        " is at or beyond the branch cut at pi"),
      angle_(angle) {}

bool is_rotation(const Mat3& r, double tol) {
  return (r.transpose() * r - Mat3::Identity()).norm() <= tol &&
         std::abs(r.determinant() - 1.0) <= tol;
}

Pose Pose::FromMatrix(const Mat4& m, double tol) {
  if (m(3, 0) != 0.0 || m(3, 1) != 0.0 || m(3, 2) != 0.0 || m(3, 3) != 1.0) {
    throw std::invalid_argument("Pose: last row must be (0, 0, 0, 1)");
  }
  Mat3 r = m.topLeftCorner<3, 3>();
  if (!is_rotation(r, tol)) {
    throw std::invalid_argument("Pose: upper-left block is not a rotation");
  }
  return Pose(r, m.topRightCorner<3, 1>());
}

Mat4 Pose::matrix() const {
  Mat4 m = Mat4::Identity();
  m.topLeftCorner<3, 3>() = rot_;
  m.topRightCorner<3, 1>() = pos_;
  return m;
}

Mat3 hat3(const Vec3& w) {
  Mat3 s;
  // clang-format off
  s <<  0.0,  -w.z(),  w.y(),
        w.z(),  0.0,  -w.x(),
       -w.y(),  w.x(),  0.0;
  // clang-format on
  return s;
}

Vec3 vee3(const Mat3& m, double tol) {
  if ((m + m.transpose()).norm() > tol) {
    throw std::invalid_argument("vee3: matrix is not skew-symmetric");
  }
  return Vec3(m(2, 1), m(0, 2), m(1, 0));
}

Mat4 hat6(const Twist& xi) {
  Mat4 m = Mat4::Zero();
  m.topLeftCorner<3, 3>() = hat3(xi.omega());
  m.topRightCorner<3, 1>() = xi.vel();
  return m;
}

Twist vee6(const Mat4& m, double tol) {
  if (m.row(3).norm() > tol) {
    throw std::invalid_argument("vee6: bottom row must be zero");
  }
  return Twist(vee3(m.topLeftCorner<3, 3>(), tol), m.topRightCorner<3, 1>());
}

Mat3 exp_so3(const Vec3& w) {
  const RodriguesCoeffs k = rodrigues_coeffs(w.norm());
  const Mat3 wh = hat3(w);
  return Mat3::Identity() + k.a * wh + k.b * wh * wh;
}

Vec3 log_so3(const Mat3& r) {
  const Vec3 axis_sin = skew_part_vee(r);
  const double s = axis_sin.norm();
  const double c = 0.5 * (r.trace() - 1.0);
  const double theta = std::atan2(s, c);
  if (theta >= std::numbers::pi - kBranchMargin) {
    throw BranchCutError(theta);
  }
  double factor;
  if (theta < kSmallAngle) {
    const double t2 = theta * theta;
    factor = 1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0;
  } else {
    factor = theta / s;
  }
  return factor * axis_sin;
}

Pose exp_se3(const Twist& xi) {
  const Vec3 w = xi.omega();
  const RodriguesCoeffs k = rodrigues_coeffs(w.norm());
  const Mat3 wh = hat3(w);
  const Mat3 wh2 = wh * wh;
  const Mat3 rot = Mat3::Identity() + k.a * wh + k.b * wh2;
  const Mat3 v = Mat3::Identity() + k.b * wh + k.c * wh2;
  return Pose(rot, v * xi.vel());
}

Twist log_se3(const Pose& x) {
  const Vec3 w = log_so3(x.rot());
  const double theta = w.norm();
  double d;
  if (theta < kSmallAngle) {
    const double t2 = theta * theta;
    d = 1.0 / 12.0 + t2 / 720.0 + t2 * t2 / 30240.0;
  } else {
    const double half = std::sin(0.5 * theta);
    d = (1.0 - theta * std::sin(theta) / (4.0 * half * half)) /
        (theta * theta);
  }
  const Mat3 wh = hat3(w);
  const Mat3 v_inv = Mat3::Identity() - 0.5 * wh + d * wh * wh;
  return Twist(w, v_inv * x.pos());
}

Mat6 ad6(const Twist& xi) {
  const Mat3 wh = hat3(xi.omega());
  Mat6 m = Mat6::Zero();
  m.topLeftCorner<3, 3>() = wh;
  m.bottomLeftCorner<3, 3>() = hat3(xi.vel());
  m.bottomRightCorner<3, 3>() = wh;
  return m;
}

Mat6 coad6(const Twist& xi) {
  const Mat3 wh = hat3(xi.omega());
  Mat6 m = Mat6::Zero();
  m.topLeftCorner<3, 3>() = -wh;
  m.topRightCorner<3, 3>() = -hat3(xi.vel());
  m.bottomRightCorner<3, 3>() = -wh;
  return m;
}

}  // namespace lieadapt
