#ifndef LIEADAPT_ERROR_DYNAMICS_HPP
#define LIEADAPT_ERROR_DYNAMICS_HPP

#include <utility>

#include "lieadapt/rigid_body.hpp"

namespace lieadapt {

using Vec12 = Eigen::Matrix<double, 12, 1>;
using Mat12 = Eigen::Matrix<double, 12, 12>;
using Mat12x6 = Eigen::Matrix<double, 12, 6>;
using Mat6x12 = Eigen::Matrix<double, 6, 12>;

/// Lie-algebra tracking error: psi = log(X_d^{-1} X)^v and twist error.
struct ErrorState {
  Twist psi;
  Twist dzeta;

  /// Stacked regression state x = [psi; dzeta].
  Vec12 stacked() const;
};

ErrorState error_state(const BodyState& s, const Pose& ref_pose,
                       const Twist& ref_twist);

struct ErrorRates {
  Mat4 pose_error_rate;  // Psi_dot
  Vec6 twist_error_rate;
};

/// Exact (unlinearized) error dynamics:
///   Psi_dot  = Psi zeta^ - zeta_d^ Psi
///   dzeta_dot = f(zeta, u) - f(zeta_d, u_d)
/// with Psi = X_d^{-1} X. Used to check the linear model, not for control.
ErrorRates nonlinear_error_rhs(const BodyState& s, const ReferenceSample& ref,
                               const ControlInput& u, const InertialParams& p);

/// Jacobian of twist_dynamics with respect to the twist at zeta_d:
///   J^{-1} coad6(zeta_d) J + J^{-1} [[(I_b w_d)^, m v_d^], [m v_d^, 0]].
/// It does not depend on u_d.
Mat6 gamma_matrix(const Twist& zeta_d, const InertialParams& p);

/// Forward-Euler discretization of the linear error dynamics about a
/// constant reference twist.
struct LinearModel {
  Mat12 a;
  Mat12x6 b;
  double dt;
};

/// Continuous pair A_c = [[-ad6(zeta_d), I], [0, Gamma]], B_c = [0; J^{-1}].
std::pair<Mat12, Mat12x6> continuous_error_model(const Twist& zeta_d,
                                                 const InertialParams& p);

/// a = I + A_c dt, b = B_c dt.
LinearModel linearize(const Twist& zeta_d, const InertialParams& p,
                      double dt);

/// [b, a b, ..., a^11 b].
Eigen::Matrix<double, 12, 72> controllability_matrix(const LinearModel& m);

}  // namespace lieadapt

#endif  // LIEADAPT_ERROR_DYNAMICS_HPP
