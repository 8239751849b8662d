#include "lieadapt/rigid_body.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace lieadapt {

InertialParams::InertialParams(double mass, const Mat3& inertia)
    : mass_(mass), inertia_(inertia) {
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw std::invalid_argument("InertialParams: mass must be positive");
  }
  if (!inertia.allFinite() ||
      (inertia - inertia.transpose()).norm() > 1e-10) {
    throw std::invalid_argument("InertialParams: inertia must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat3> es(inertia, Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues().minCoeff() > 0.0)) {
    throw std::invalid_argument(
        "InertialParams: inertia must be positive definite");
  }
}

InertialParams InertialParams::ReferenceBody() {
  Mat3 ib;
  // clang-format off
  ib << 1.0, 0.2, 0.1,
        0.2, 1.0, 0.2,
        0.1, 0.2, 1.0;
  // clang-format on
  return InertialParams(2.0, ib);
}

Mat6 generalized_inertia(const InertialParams& p) {
  Mat6 j = Mat6::Zero();
  j.topLeftCorner<3, 3>() = p.inertia();
  j.bottomRightCorner<3, 3>() = p.mass() * Mat3::Identity();
  return j;
}

Mat6 generalized_inertia_inverse(const InertialParams& p) {
  Mat6 j = Mat6::Zero();
  j.topLeftCorner<3, 3>() = p.inertia().inverse();
  j.bottomRightCorner<3, 3>() = Mat3::Identity() / p.mass();
  return j;
}

Vec6 twist_dynamics(const Twist& zeta, const ControlInput& u,
                    const InertialParams& p) {
  // Block-diagonal J_b lets the solve split into a 3x3 system and a scale.
  const Vec6 momentum_rate =
      coad6(zeta) * (generalized_inertia(p) * zeta.coeffs()) + u.coeffs();
  Vec6 out;
  out.head<3>() = p.inertia().ldlt().solve(momentum_rate.head<3>());
  out.tail<3>() = momentum_rate.tail<3>() / p.mass();
  return out;
}

ControlInput feasible_reference_input(const Twist& zeta_d,
                                      const InertialParams& p,
                                      ReferenceInputMode mode) {
  const Vec3 w = zeta_d.omega();
  const Vec3 v = zeta_d.vel();
  const Vec3 force = p.mass() * w.cross(v);
  if (mode == ReferenceInputMode::kForceOnly) {
    return ControlInput(Vec3::Zero(), force);
  }
  return ControlInput(-coad6(zeta_d) *
                      (generalized_inertia(p) * zeta_d.coeffs()));
}

BodyState step(const BodyState& s, const ControlInput& u,
               const InertialParams& p, double dt) {
  const Twist z1 = s.twist;
  const Vec6 k1 = twist_dynamics(z1, u, p);
  const Twist z2(z1.coeffs() + 0.5 * dt * k1);
  const Vec6 k2 = twist_dynamics(z2, u, p);
  const Twist z3(z1.coeffs() + 0.5 * dt * k2);
  const Vec6 k3 = twist_dynamics(z3, u, p);
  const Twist z4(z1.coeffs() + dt * k3);
  const Vec6 k4 = twist_dynamics(z4, u, p);

  const Twist mid((z1.coeffs() + 2.0 * z2.coeffs() + 2.0 * z3.coeffs() +
                   z4.coeffs()) /
                  6.0);
  BodyState next;
  next.twist = Twist(z1.coeffs() + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
  next.pose = s.pose * exp_se3(mid * dt);
  return next;
}

ReferenceSample reference_trajectory(const Twist& zeta_d,
                                     const ControlInput& u_d, double dt,
                                     std::int64_t k) {
  return {exp_se3(zeta_d * (static_cast<double>(k) * dt)), zeta_d, u_d};
}

InertialParams perturb_params(const InertialParams& p,
                              const PerturbationConfig& cfg,
                              std::uint64_t seed) {
  if (cfg.spread < 0.0 || cfg.scale < 0.0 || cfg.mass_fraction < 0.0) {
    throw std::invalid_argument("perturb_params: magnitudes must be >= 0");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Mat3 g;
  for (int i = 0; i < 9; ++i) g(i / 3, i % 3) = cfg.spread * unit(rng);
  Mat3 delta_i = cfg.scale * g * g.transpose();
  delta_i = (0.5 * (delta_i + delta_i.transpose())).eval();

  const double delta = cfg.mass_fraction * p.mass();
  const double mass = std::max(p.mass() + delta * unit(rng), 0.1 * p.mass());
  return InertialParams(mass, p.inertia() + delta_i);
}

}  // namespace lieadapt
