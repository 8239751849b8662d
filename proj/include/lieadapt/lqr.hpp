#ifndef LIEADAPT_LQR_HPP
#define LIEADAPT_LQR_HPP

#include <Eigen/Core>
#include <limits>
#include <stdexcept>

#include "lieadapt/error_dynamics.hpp"

namespace lieadapt {

/// Thrown when value iteration hits the iteration cap.
class DareConvergenceError : public std::runtime_error {
 public:
  DareConvergenceError(int iterations, double last_step, double residual);
  int iterations() const { return iterations_; }
  double last_step() const { return last_step_; }
  double residual() const { return residual_; }

 private:
  int iterations_;
  double last_step_;
  double residual_;
};

struct DareOptions {
  // Stop once ||P_{i+1} - P_i||_F < max(step_tol, rounding_floor ||P_i||_F).
  double step_tol = 1e-12;
  double rounding_floor = 4.0 * std::numeric_limits<double>::epsilon();
  int max_iterations = 100000;
};

/// Stabilizing DARE solution. The gain carries the minus sign, so the
/// feedback law is du = k x.
struct RiccatiSolution {
  Eigen::MatrixXd p;
  Eigen::MatrixXd k;
  double residual = 0.0;
  int iterations = 0;
};

/// Solves P = A'PA + Q - A'PB (B'PB + R)^{-1} B'PA by value iteration from
/// P_0 = Q, then k = -(B'PB + R)^{-1} B'PA.
///
/// Throws std::invalid_argument for mismatched shapes, a Q that is not
/// symmetric PSD or an R that is not symmetric PD, and DareConvergenceError
/// when the iteration cap is reached.
RiccatiSolution solve_dare(const Eigen::Ref<const Eigen::MatrixXd>& a,
                           const Eigen::Ref<const Eigen::MatrixXd>& b,
                           const Eigen::Ref<const Eigen::MatrixXd>& q,
                           const Eigen::Ref<const Eigen::MatrixXd>& r,
                           const DareOptions& opts = {});

RiccatiSolution solve_dare(const LinearModel& model, const Mat12& q,
                           const Mat6& r, const DareOptions& opts = {});

/// Frobenius norm of the DARE defect at p.
double dare_residual(const Eigen::Ref<const Eigen::MatrixXd>& a,
                     const Eigen::Ref<const Eigen::MatrixXd>& b,
                     const Eigen::Ref<const Eigen::MatrixXd>& q,
                     const Eigen::Ref<const Eigen::MatrixXd>& r,
                     const Eigen::Ref<const Eigen::MatrixXd>& p);

double spectral_radius(const Eigen::Ref<const Eigen::MatrixXd>& m);

/// Gain of the LQR tracking controller for a constant reference twist.
Mat6x12 tracking_gain(const Twist& zeta_d, const InertialParams& p,
                      double dt, const Mat12& q, const Mat6& r);

}  // namespace lieadapt

#endif  // LIEADAPT_LQR_HPP
