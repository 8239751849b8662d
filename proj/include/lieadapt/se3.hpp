#ifndef LIEADAPT_SE3_HPP
#define LIEADAPT_SE3_HPP

#include <Eigen/Core>
#include <stdexcept>

namespace lieadapt {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

/// Raised by log maps when the rotation angle reaches the branch cut at pi.
class BranchCutError : public std::domain_error {
 public:
  explicit BranchCutError(double angle);
  double angle() const { return angle_; }

 private:
  double angle_;
};

/// Body-frame twist stacked as (omega, v).
class Twist {
 public:
  Twist() : coeffs_(Vec6::Zero()) {}
  explicit Twist(const Vec6& coeffs) : coeffs_(coeffs) {}
  Twist(const Vec3& omega, const Vec3& vel) { coeffs_ << omega, vel; }

  static Twist Zero() { return Twist(); }

  Vec3 omega() const { return coeffs_.head<3>(); }
  Vec3 vel() const { return coeffs_.tail<3>(); }
  const Vec6& coeffs() const { return coeffs_; }

  Twist operator+(const Twist& o) const { return Twist(coeffs_ + o.coeffs_); }
  Twist operator-(const Twist& o) const { return Twist(coeffs_ - o.coeffs_); }
  Twist operator*(double s) const { return Twist(coeffs_ * s); }
  friend Twist operator*(double s, const Twist& t) { return t * s; }
  bool operator==(const Twist& o) const { return coeffs_ == o.coeffs_; }

 private:
  Vec6 coeffs_;
};

/// Rigid transform (R, p). The rotation is trusted to lie on SO(3); use
/// Pose::FromMatrix to validate external data.
class Pose {
 public:
  Pose() : rot_(Mat3::Identity()), pos_(Vec3::Zero()) {}
  Pose(const Mat3& rot, const Vec3& pos) : rot_(rot), pos_(pos) {}

  static Pose Identity() { return Pose(); }
  /// Validates the rotation block and the homogeneous last row.
  static Pose FromMatrix(const Mat4& m, double tol = 1e-9);

  const Mat3& rot() const { return rot_; }
  const Vec3& pos() const { return pos_; }
  Mat4 matrix() const;

  Pose operator*(const Pose& o) const {
    return Pose(rot_ * o.rot_, rot_ * o.pos_ + pos_);
  }
  Pose inverse() const {
    Mat3 rt = rot_.transpose();
    return Pose(rt, -rt * pos_);
  }

 private:
  Mat3 rot_;
  Vec3 pos_;
};

inline Pose compose(const Pose& x, const Pose& y) { return x * y; }
inline Pose inverse(const Pose& x) { return x.inverse(); }

/// True when r^T r = I and det r = 1 within tol (Frobenius).
bool is_rotation(const Mat3& r, double tol = 1e-9);

// Rotation angles below this use Taylor expansions of the closed forms.
inline constexpr double kSmallAngle = 1e-6;
// log maps reject angles at or beyond pi - kBranchMargin.
inline constexpr double kBranchMargin = 1e-6;

Mat3 hat3(const Vec3& w);
/// Throws std::invalid_argument when m is not skew within tol.
Vec3 vee3(const Mat3& m, double tol = 1e-9);

Mat4 hat6(const Twist& xi);
/// Throws std::invalid_argument unless the bottom row is zero and the
/// upper-left block is skew.
Twist vee6(const Mat4& m, double tol = 1e-9);

Mat3 exp_so3(const Vec3& w);
Vec3 log_so3(const Mat3& r);

Pose exp_se3(const Twist& xi);
Twist log_se3(const Pose& x);

/// Matrix of the bracket action: ad6(xi) * eta = vee([xi^, eta^]).
/// Block form [[w^, 0], [v^, w^]].
Mat6 ad6(const Twist& xi);

/// -[[w^, v^], [0, w^]], the coadjoint map in the momentum-coupling term of
/// the rigid body dynamics. Equal to ad6(xi)^T.
Mat6 coad6(const Twist& xi);

}  // namespace lieadapt

#endif  // LIEADAPT_SE3_HPP
