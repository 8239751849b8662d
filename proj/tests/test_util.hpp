// Shared generators and independent oracles for the test suites.
#ifndef LIEADAPT_TESTS_TEST_UTIL_HPP
#define LIEADAPT_TESTS_TEST_UTIL_HPP

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include <vector>

#include "lieadapt/error_dynamics.hpp"
#include "lieadapt/rigid_body.hpp"

namespace lieadapt::testing {

inline Vec3 random_vec3(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return Vec3(u(rng), u(rng), u(rng));
}

inline Vec6 random_vec6(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vec6 v;
  for (int i = 0; i < 6; ++i) v(i) = u(rng);
  return v;
}

/// Twist whose rotation angle is uniform on [0, max_angle).
inline Twist random_twist(std::mt19937_64& rng, double max_angle,
                          double vel_scale = 2.0) {
  std::uniform_real_distribution<double> angle(0.0, max_angle);
  Vec3 axis = random_vec3(rng);
  while (axis.norm() < 1e-3) axis = random_vec3(rng);
  return Twist(axis.normalized() * angle(rng), random_vec3(rng, vel_scale));
}

inline Pose random_pose(std::mt19937_64& rng) {
  return exp_se3(random_twist(rng, 3.0));
}

/// Random valid parameters: mass in [0.5, 5], inertia = A A^T + 0.2 I.
inline InertialParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mass(0.5, 5.0);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  Mat3 a;
  for (int i = 0; i < 9; ++i) a(i / 3, i % 3) = entry(rng);
  Mat3 inertia = a * a.transpose() + 0.2 * Mat3::Identity();
  inertia = (0.5 * (inertia + inertia.transpose())).eval();
  return InertialParams(mass(rng), inertia);
}

/// Power series sum_{i < terms} m^i / i!, evaluated on m / 2^s with
/// ||m / 2^s|| <= 1/2 and squared back s times, so the truncation error
/// stays far below 1e-10 at rotation angles near pi.
inline Mat4 exp_series(const Mat4& m, int terms = 20) {
  int s = 0;
  double norm = m.norm();
  while (norm > 0.5) {
    norm /= 2.0;
    ++s;
  }
  const Mat4 scaled = m / std::ldexp(1.0, s);
  Mat4 sum = Mat4::Identity();
  Mat4 term = Mat4::Identity();
  for (int i = 1; i < terms; ++i) {
    term = term * scaled / static_cast<double>(i);
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

/// Central-difference Jacobian of twist_dynamics with respect to the twist.
inline Mat6 fd_twist_jacobian(const Twist& zeta, const ControlInput& u,
                              const InertialParams& p, double h = 1e-5) {
  Mat6 jac;
  for (int i = 0; i < 6; ++i) {
    Vec6 e = Vec6::Zero();
    e(i) = h;
    jac.col(i) = (twist_dynamics(Twist(zeta.coeffs() + e), u, p) -
                  twist_dynamics(Twist(zeta.coeffs() - e), u, p)) /
                 (2.0 * h);
  }
  return jac;
}

inline double kinetic_energy(const Twist& z, const InertialParams& p) {
  return 0.5 * z.coeffs().dot(generalized_inertia(p) * z.coeffs());
}

/// Central difference of Psi(t) = X_d(t)^{-1} X(t) along the simulated flow
/// (constant u) and the constant-twist reference, minus the analytic rate.
inline double psi_rate_fd_error(const BodyState& s, const ReferenceSample& ref,
                                const ControlInput& u, const InertialParams& p,
                                double h) {
  const BodyState fwd = step(s, u, p, h);
  const BodyState bwd = step(s, u, p, -h);
  const Pose ref_fwd = ref.pose * exp_se3(ref.twist * h);
  const Pose ref_bwd = ref.pose * exp_se3(ref.twist * -h);
  const Mat4 fd = ((ref_fwd.inverse() * fwd.pose).matrix() -
                   (ref_bwd.inverse() * bwd.pose).matrix()) /
                  (2.0 * h);
  return (fd - nonlinear_error_rhs(s, ref, u, p).pose_error_rate).norm();
}

/// Least-squares slope of log(err) against log(h).
inline double observed_order(const std::vector<double>& h,
                             const std::vector<double>& err) {
  double mx = 0, my = 0;
  const double n = static_cast<double>(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    mx += std::log(h[i]) / n;
    my += std::log(err[i]) / n;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double dx = std::log(h[i]) - mx;
    sxy += dx * (std::log(err[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

/// Step sizes 1e-3, 5e-4, ... halving down to (but not below) 1e-5.
inline std::vector<double> halving_steps() {
  std::vector<double> h;
  for (double x = 1e-3; x >= 1e-5; x /= 2.0) h.push_back(x);
  return h;
}

}  // namespace lieadapt::testing

#endif  // LIEADAPT_TESTS_TEST_UTIL_HPP
