#include "rbpca/pca.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "rbpca/errors.hpp"

namespace rbpca {

namespace {

void fix_signs(Eigen::MatrixXd& V) {
  for (Eigen::Index j = 0; j < V.cols(); ++j) {
    Eigen::Index idx = 0;
    V.col(j).cwiseAbs().maxCoeff(&idx);
    if (V(idx, j) < 0.0) V.col(j) = -V.col(j);
  }
}

int retained_count(const Eigen::VectorXd& eigenvalues) {
  const double mean = eigenvalues.mean();
  int a = 0;
  for (Eigen::Index j = 0; j < eigenvalues.size(); ++j)
    if (eigenvalues[j] > mean) ++a;
  return std::max(a, 1);
}

}  // namespace

std::pair<FeatureMatrix, Eigen::VectorXd> center(const Eigen::Ref<const FeatureMatrix>& Z) {
  if (Z.rows() < 2) throw DataError("center: need at least two samples");
  Eigen::VectorXd mean = Z.colwise().mean();
  FeatureMatrix Zbar = Z.rowwise() - mean.transpose();
  return {std::move(Zbar), std::move(mean)};
}

PcaModel fit_pca(const Eigen::Ref<const FeatureMatrix>& Zbar) {
  const Eigen::Index n = Zbar.rows();
  const Eigen::Index m = Zbar.cols();
  if (n < 2) throw DataError("fit_pca: need at least two samples");

  PcaModel model;
  if (m <= n) {
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(m, m);
    R.selfadjointView<Eigen::Lower>().rankUpdate(Zbar.transpose(), 1.0 / static_cast<double>(n - 1));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(R);
    if (solver.info() != Eigen::Success)
      throw NumericError("fit_pca: eigensolver failed on the " + std::to_string(m) +
                         "x" + std::to_string(m) + " covariance");
    model.eigenvalues = solver.eigenvalues().reverse().cwiseMax(0.0);
    Eigen::MatrixXd V = solver.eigenvectors().rowwise().reverse();
    model.a = retained_count(model.eigenvalues);
    model.V = V.leftCols(model.a);
  } else {
    // Dual route: same nonzero spectrum from the n x n Gram matrix.
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
    G.selfadjointView<Eigen::Lower>().rankUpdate(Zbar, 1.0 / static_cast<double>(n - 1));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(G.selfadjointView<Eigen::Lower>());
    if (solver.info() != Eigen::Success)
      throw NumericError("fit_pca: eigensolver failed on the " + std::to_string(n) +
                         "x" + std::to_string(n) + " Gram matrix");
    Eigen::VectorXd lam_n = solver.eigenvalues().reverse().cwiseMax(0.0);
    Eigen::MatrixXd U = solver.eigenvectors().rowwise().reverse();
    model.eigenvalues = Eigen::VectorXd::Zero(m);
    model.eigenvalues.head(n) = lam_n;
    model.a = retained_count(model.eigenvalues);
    model.V.resize(m, model.a);
    for (int j = 0; j < model.a; ++j) {
      const double lam = lam_n[j];
      if (lam <= 0.0)
        throw NumericError("fit_pca: retained eigenvalue " + std::to_string(j) + " is zero");
      model.V.col(j) = Zbar.transpose() * U.col(j) / std::sqrt(static_cast<double>(n - 1) * lam);
    }
  }
  fix_signs(model.V);
  return model;
}

double q_statistic(const PcaModel& model, const Eigen::Ref<const Eigen::VectorXd>& zbar) {
  if (zbar.size() != model.V.rows())
    throw DataError("q_statistic: vector has dimension " + std::to_string(zbar.size()) +
                    ", model expects " + std::to_string(model.V.rows()));
  const double q = zbar.squaredNorm() - (model.V.transpose() * zbar).squaredNorm();
  return q > 0.0 ? q : 0.0;
}

}  // namespace rbpca
