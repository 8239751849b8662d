#ifndef LIEADAPT_RIGID_BODY_HPP
#define LIEADAPT_RIGID_BODY_HPP

#include <cstdint>
#include <tuple>

#include "lieadapt/se3.hpp"

namespace lieadapt {

/// Mass and body-frame inertia. Construction validates mass > 0 and a
/// symmetric positive-definite inertia.
class InertialParams {
 public:
  InertialParams(double mass, const Mat3& inertia);

  double mass() const { return mass_; }
  const Mat3& inertia() const { return inertia_; }

  /// m = 2, I_b = [[1, .2, .1], [.2, 1, .2], [.1, .2, 1]].
  static InertialParams ReferenceBody();

 private:
  double mass_;
  Mat3 inertia_;
};

/// J_b = blkdiag(I_b, m I_3), mapping twist to body momentum.
Mat6 generalized_inertia(const InertialParams& p);
Mat6 generalized_inertia_inverse(const InertialParams& p);

/// Body torque and force stacked as (tau, f).
class ControlInput {
 public:
  ControlInput() : coeffs_(Vec6::Zero()) {}
  explicit ControlInput(const Vec6& coeffs) : coeffs_(coeffs) {}
  ControlInput(const Vec3& torque, const Vec3& force) {
    coeffs_ << torque, force;
  }

  Vec3 torque() const { return coeffs_.head<3>(); }
  Vec3 force() const { return coeffs_.tail<3>(); }
  const Vec6& coeffs() const { return coeffs_; }

  ControlInput operator+(const ControlInput& o) const {
    return ControlInput(coeffs_ + o.coeffs_);
  }
  ControlInput operator-(const ControlInput& o) const {
    return ControlInput(coeffs_ - o.coeffs_);
  }

 private:
  Vec6 coeffs_;
};

struct BodyState {
  Pose pose;
  Twist twist;
};

/// zeta_dot = J_b^{-1} (coad6(zeta) J_b zeta + u).
Vec6 twist_dynamics(const Twist& zeta, const ControlInput& u,
                    const InertialParams& p);

enum class ReferenceInputMode {
  // -coad6(zeta_d) J_b zeta_d: makes the constant reference an equilibrium.
  kExact,
  // (0, m (w_d x v_d)): force-only Coriolis cancellation.
  kForceOnly,
};

ControlInput feasible_reference_input(const Twist& zeta_d,
                                      const InertialParams& p,
                                      ReferenceInputMode mode =
                                          ReferenceInputMode::kExact);

/// One step of zero-order-hold simulation: RK4 on the twist, then
/// X <- X exp(dt * zeta_mid) with zeta_mid the RK4-weighted twist.
BodyState step(const BodyState& s, const ControlInput& u,
               const InertialParams& p, double dt);

struct ReferenceSample {
  Pose pose;
  Twist twist;
  ControlInput input;
};

/// Constant-twist reference from X_0 = I: X_{d,k} = exp(k dt zeta_d).
ReferenceSample reference_trajectory(const Twist& zeta_d,
                                     const ControlInput& u_d, double dt,
                                     std::int64_t k);

struct PerturbationConfig {
  double spread = 0.3;         // g: G entries uniform on [-g, g]
  double scale = 1.0;          // s: Delta_I = s G G^T
  double mass_fraction = 0.5;  // delta = mass_fraction * m
};

/// Nominal parameters (m + Delta_m, I_b + s G G^T). Delta_m is uniform on
/// [-delta, delta] and the result is clamped to at least 0.1 m.
InertialParams perturb_params(const InertialParams& p,
                              const PerturbationConfig& cfg,
                              std::uint64_t seed);

}  // namespace lieadapt

#endif  // LIEADAPT_RIGID_BODY_HPP
