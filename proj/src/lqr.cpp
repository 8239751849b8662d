#include "lieadapt/lqr.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <limits>
#include <string>

namespace lieadapt {

using Eigen::MatrixXd;

DareConvergenceError::DareConvergenceError(int iterations, double last_step,
                                           double residual)
    : std::runtime_error("solve_dare: no convergence after " +
                         std::to_string(iterations) +
                         " iterations (last step " + std::to_string(last_step) +
                         ", residual " + std::to_string(residual) + ")"),
      iterations_(iterations),
      last_step_(last_step),
      residual_(residual) {}

namespace {

MatrixXd riccati_map(const MatrixXd& a, const MatrixXd& b, const MatrixXd& q,
                     const MatrixXd& r, const MatrixXd& p) {
  const MatrixXd pa = p * a;
  const MatrixXd pb = p * b;
  const MatrixXd s = b.transpose() * pb + r;
  const MatrixXd g = b.transpose() * pa;
  MatrixXd next = a.transpose() * pa + q - g.transpose() * s.ldlt().solve(g);
  return 0.5 * (next + next.transpose());
}

}  // namespace

double dare_residual(const Eigen::Ref<const MatrixXd>& a,
                     const Eigen::Ref<const MatrixXd>& b,
                     const Eigen::Ref<const MatrixXd>& q,
                     const Eigen::Ref<const MatrixXd>& r,
                     const Eigen::Ref<const MatrixXd>& p) {
  return (p - riccati_map(a, b, q, r, p)).norm();
}

double spectral_radius(const Eigen::Ref<const MatrixXd>& m) {
  Eigen::EigenSolver<MatrixXd> es(m, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

RiccatiSolution solve_dare(const Eigen::Ref<const MatrixXd>& a,
                           const Eigen::Ref<const MatrixXd>& b,
                           const Eigen::Ref<const MatrixXd>& q,
                           const Eigen::Ref<const MatrixXd>& r,
                           const DareOptions& opts) {
  const auto n = a.rows();
  const auto m = b.cols();
  if (a.cols() != n || b.rows() != n || q.rows() != n || q.cols() != n ||
      r.rows() != m || r.cols() != m) {
    throw std::invalid_argument("solve_dare: inconsistent dimensions");
  }
  if ((q - q.transpose()).norm() > 1e-10 ||
      Eigen::SelfAdjointEigenSolver<MatrixXd>(q, Eigen::EigenvaluesOnly)
              .eigenvalues()
              .minCoeff() < -1e-12) {
    throw std::invalid_argument("solve_dare: Q must be symmetric PSD");
  }
  Eigen::LLT<MatrixXd> r_llt(r);
  if ((r - r.transpose()).norm() > 1e-10 || r_llt.info() != Eigen::Success) {
    throw std::invalid_argument("solve_dare: R must be symmetric PD");
  }

  const MatrixXd am = a;
  const MatrixXd bm = b;
  const MatrixXd qm = q;
  const MatrixXd rm = r;

  MatrixXd p = qm;
  double last_step = 0.0;
  int it = 0;
  bool converged = false;
  while (it < opts.max_iterations) {
    MatrixXd next = riccati_map(am, bm, qm, rm, p);
    last_step = (next - p).norm();
    const double tol = std::max(opts.step_tol, opts.rounding_floor * p.norm());
    p = std::move(next);
    ++it;
    if (!p.allFinite()) break;
    if (last_step < tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw DareConvergenceError(it, last_step,
                               p.allFinite()
                                   ? dare_residual(am, bm, qm, rm, p)
                                   : std::numeric_limits<double>::infinity());
  }

  RiccatiSolution sol;
  const MatrixXd s = bm.transpose() * p * bm + rm;
  sol.k = -s.ldlt().solve(bm.transpose() * p * am);
  sol.residual = dare_residual(am, bm, qm, rm, p);
  sol.iterations = it;
  sol.p = std::move(p);
  return sol;
}

RiccatiSolution solve_dare(const LinearModel& model, const Mat12& q,
                           const Mat6& r, const DareOptions& opts) {
  return solve_dare(model.a, model.b, q, r, opts);
}

Mat6x12 tracking_gain(const Twist& zeta_d, const InertialParams& p,
                      double dt, const Mat12& q, const Mat6& r) {
  return solve_dare(linearize(zeta_d, p, dt), q, r).k;
}

}  // namespace lieadapt
