#include "lieadapt/error_dynamics.hpp"

#include <Eigen/Dense>
#include <stdexcept>

namespace lieadapt {

Vec12 ErrorState::stacked() const {
  Vec12 x;
  x << psi.coeffs(), dzeta.coeffs();
  return x;
}

ErrorState error_state(const BodyState& s, const Pose& ref_pose,
                       const Twist& ref_twist) {
  return {log_se3(ref_pose.inverse() * s.pose), s.twist - ref_twist};
}

ErrorRates nonlinear_error_rhs(const BodyState& s, const ReferenceSample& ref,
                               const ControlInput& u,
                               const InertialParams& p) {
  const Mat4 psi = (ref.pose.inverse() * s.pose).matrix();
  ErrorRates out;
  out.pose_error_rate = psi * hat6(s.twist) - hat6(ref.twist) * psi;
  out.twist_error_rate = twist_dynamics(s.twist, u, p) -
                         twist_dynamics(ref.twist, ref.input, p);
  return out;
}

Mat6 gamma_matrix(const Twist& zeta_d, const InertialParams& p) {
  const Mat6 j = generalized_inertia(p);
  const Mat6 j_inv = generalized_inertia_inverse(p);
  const Mat3 mv = p.mass() * hat3(zeta_d.vel());
  Mat6 coupling = Mat6::Zero();
  coupling.topLeftCorner<3, 3>() = hat3(p.inertia() * zeta_d.omega());
  coupling.topRightCorner<3, 3>() = mv;
  coupling.bottomLeftCorner<3, 3>() = mv;
  return j_inv * coad6(zeta_d) * j + j_inv * coupling;
}

std::pair<Mat12, Mat12x6> continuous_error_model(const Twist& zeta_d,
                                                 const InertialParams& p) {
  Mat12 a = Mat12::Zero();
  a.topLeftCorner<6, 6>() = -ad6(zeta_d);
  a.topRightCorner<6, 6>() = Mat6::Identity();
  a.bottomRightCorner<6, 6>() = gamma_matrix(zeta_d, p);
  Mat12x6 b = Mat12x6::Zero();
  b.bottomRows<6>() = generalized_inertia_inverse(p);
  return {a, b};
}

LinearModel linearize(const Twist& zeta_d, const InertialParams& p,
                      double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("linearize: dt must be positive");
  }
  auto [a_c, b_c] = continuous_error_model(zeta_d, p);
  return {Mat12::Identity() + a_c * dt, b_c * dt, dt};
}

Eigen::Matrix<double, 12, 72> controllability_matrix(const LinearModel& m) {
  Eigen::Matrix<double, 12, 72> c;
  Mat12x6 block = m.b;
  for (int i = 0; i < 12; ++i) {
    c.middleCols<6>(6 * i) = block;
    block = m.a * block;
  }
  return c;
}

}  // namespace lieadapt
