#include "lieadapt/sysid.hpp"

#include <Eigen/Dense>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

namespace lieadapt {

using Eigen::MatrixXd;

IdDataset assemble_dataset(std::span<const Vec12> states,
                           std::span<const Vec6> inputs) {
  if (inputs.empty() || states.size() != inputs.size() + 1) {
    throw std::invalid_argument(
        "assemble_dataset: need N + 1 states for N >= 1 inputs, got " +
        std::to_string(states.size()) + " states and " +
        std::to_string(inputs.size()) + " inputs");
  }
  const auto n = static_cast<Eigen::Index>(inputs.size());
  IdDataset d{MatrixXd(n, 12), MatrixXd(n, 6), MatrixXd(n, 12)};
  for (Eigen::Index i = 0; i < n; ++i) {
    d.x_minus.row(i) = states[i].transpose();
    d.u_mat.row(i) = inputs[i].transpose();
    d.x_plus.row(i) = states[i + 1].transpose();
  }
  return d;
}

IdDataset concat(const IdDataset& first, const IdDataset& second) {
  const auto n = first.rows() + second.rows();
  IdDataset d{MatrixXd(n, 12), MatrixXd(n, 6), MatrixXd(n, 12)};
  d.x_minus << first.x_minus, second.x_minus;
  d.u_mat << first.u_mat, second.u_mat;
  d.x_plus << first.x_plus, second.x_plus;
  return d;
}

void write_dataset_csv(std::ostream& os, const IdDataset& d) {
  for (int j = 0; j < 12; ++j) os << "x" << j << ",";
  for (int j = 0; j < 6; ++j) os << "u" << j << ",";
  for (int j = 0; j < 12; ++j) os << "xp" << j << (j < 11 ? "," : "\n");
  const auto old = os.precision(17);
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    for (int j = 0; j < 12; ++j) os << d.x_minus(i, j) << ",";
    for (int j = 0; j < 6; ++j) os << d.u_mat(i, j) << ",";
    for (int j = 0; j < 12; ++j) {
      os << d.x_plus(i, j) << (j < 11 ? "," : "\n");
    }
  }
  os.precision(old);
}

IdDataset read_dataset_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("x0,", 0) != 0) {
    throw std::invalid_argument("read_dataset_csv: missing header");
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != 30) {
      throw std::invalid_argument("read_dataset_csv: expected 30 columns in row " +
                                  std::to_string(rows.size() + 1));
    }
    rows.push_back(std::move(row));
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  IdDataset d{MatrixXd(n, 12), MatrixXd(n, 6), MatrixXd(n, 12)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = rows[i];
    for (int j = 0; j < 12; ++j) d.x_minus(i, j) = r[j];
    for (int j = 0; j < 6; ++j) d.u_mat(i, j) = r[12 + j];
    for (int j = 0; j < 12; ++j) d.x_plus(i, j) = r[18 + j];
  }
  return d;
}

namespace {

MatrixXd regressors(const IdDataset& d) {
  MatrixXd z(d.rows(), 18);
  z << d.x_minus, d.u_mat;
  return z;
}

}  // namespace

Eigen::Matrix<double, 18, 18> regression_gram(const IdDataset& d) {
  const MatrixXd z = regressors(d);
  return z.transpose() * z;
}

double gram_condition(const IdDataset& d) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 18, 18>> es(
      regression_gram(d), Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

IdentifiedModel fit_linear_model(const IdDataset& d, double lambda) {
  if (d.rows() < 1 || d.u_mat.rows() != d.rows() ||
      d.x_plus.rows() != d.rows()) {
    throw std::invalid_argument("fit_linear_model: malformed dataset");
  }
  if (!(lambda >= 0.0)) {
    throw std::invalid_argument("fit_linear_model: lambda must be >= 0");
  }
  const MatrixXd z = regressors(d);
  Eigen::Matrix<double, 18, 18> gram = z.transpose() * z;
  const Eigen::Matrix<double, 18, 12> rhs = z.transpose() * d.x_plus;

  if (lambda == 0.0) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 18, 18>> es(
        gram, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    if (!(lo > 1e-12 * es.eigenvalues().maxCoeff())) {
      throw SingularRegressionError(
          "fit_linear_model: Gram matrix is singular; use lambda > 0");
    }
  }
  gram.diagonal().array() += lambda;
  Eigen::LLT<Eigen::Matrix<double, 18, 18>> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw SingularRegressionError(
        "fit_linear_model: normal equations are not positive definite");
  }
  const Eigen::Matrix<double, 18, 12> theta = llt.solve(rhs);
  IdentifiedModel m;
  m.a_hat = theta.topRows<12>().transpose();
  m.b_hat = theta.bottomRows<6>().transpose();
  m.lambda = lambda;
  return m;
}

Reconstruction reconstruct_params(const IdentifiedModel& m, double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("reconstruct_params: dt must be positive");
  }
  const Mat6 lower = m.b_hat.bottomRows<6>() / dt;
  Eigen::FullPivLU<Mat6> lu(lower);
  if (!lu.isInvertible() || !lower.allFinite()) {
    throw SingularRegressionError(
        "reconstruct_params: identified input block is singular");
  }
  const Mat6 j = lu.inverse();

  const double mass = j.bottomRightCorner<3, 3>().trace() / 3.0;
  if (!(mass > 0.0)) {
    throw SingularRegressionError(
        "reconstruct_params: identified mass is not positive");
  }
  const Mat3 sym = 0.5 * (j.topLeftCorner<3, 3>() +
                          j.topLeftCorner<3, 3>().transpose());
  Eigen::SelfAdjointEigenSolver<Mat3> es(sym);
  Vec3 eig = es.eigenvalues();
  const bool clamped = eig.minCoeff() < kInertiaEigenFloor;
  Mat3 inertia = sym;
  if (clamped) {
    eig = eig.cwiseMax(kInertiaEigenFloor);
    inertia = es.eigenvectors() * eig.asDiagonal() *
              es.eigenvectors().transpose();
    inertia = (0.5 * (inertia + inertia.transpose())).eval();
  }
  return {InertialParams(mass, inertia), clamped};
}

ParamErrors reconstruction_errors(const InertialParams& est,
                                  const InertialParams& truth) {
  return {(est.inertia() - truth.inertia()).norm(),
          std::abs(est.mass() - truth.mass())};
}

}  // namespace lieadapt
