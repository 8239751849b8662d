#ifndef LIEADAPT_SYSID_HPP
#define LIEADAPT_SYSID_HPP

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>

#include "lieadapt/error_dynamics.hpp"

namespace lieadapt {

/// Row-stacked transitions: x_plus.row(i) ~ a x_minus.row(i) + b u_mat.row(i).
struct IdDataset {
  Eigen::MatrixXd x_minus;  // N x 12
  Eigen::MatrixXd u_mat;    // N x 6
  Eigen::MatrixXd x_plus;   // N x 12

  Eigen::Index rows() const { return x_minus.rows(); }
};

/// states holds x_0..x_N, inputs du_0..du_{N-1}.
IdDataset assemble_dataset(std::span<const Vec12> states,
                           std::span<const Vec6> inputs);

/// Vertical concatenation of two datasets.
IdDataset concat(const IdDataset& first, const IdDataset& second);

/// CSV with header x0..x11,u0..u5,xp0..xp11 and 17 significant digits.
void write_dataset_csv(std::ostream& os, const IdDataset& d);
IdDataset read_dataset_csv(std::istream& is);

/// The unregularized 18x18 Gram matrix [X U]^T [X U].
Eigen::Matrix<double, 18, 18> regression_gram(const IdDataset& d);

/// Condition number (eigenvalue ratio) of the regression Gram matrix;
/// infinity when it is singular.
double gram_condition(const IdDataset& d);

struct IdentifiedModel {
  Mat12 a_hat;
  Mat12x6 b_hat;
  double lambda;
};

/// Thrown when the normal equations cannot be solved.
class SingularRegressionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Solves ([X U]^T [X U] + lambda I) [A^T; B^T] = [X U]^T X_+.
/// lambda = 0 is accepted only if the Gram matrix is well conditioned.
IdentifiedModel fit_linear_model(const IdDataset& d, double lambda);

struct Reconstruction {
  InertialParams params;
  // Set when an eigenvalue of the symmetrized inertia was raised to the
  // floor to keep the estimate positive definite.
  bool inertia_clamped = false;
};

inline constexpr double kInertiaEigenFloor = 1e-6;

/// Recovers (I_b, m) from the input block of the identified model:
/// J = (b_hat.bottomRows(6) / dt)^{-1}, m = trace(J_vv) / 3 and
/// I_b = SPD projection of sym(J_ww).
Reconstruction reconstruct_params(const IdentifiedModel& m, double dt);

struct ParamErrors {
  double inertia;  // ||I_hat - I||_F
  double mass;     // |m_hat - m|
};

ParamErrors reconstruction_errors(const InertialParams& est,
                                  const InertialParams& truth);

}  // namespace lieadapt

#endif  // LIEADAPT_SYSID_HPP
