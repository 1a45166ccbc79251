#include "rbpca/kpca.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>
#include <vector>

#include "rbpca/errors.hpp"
#include "rbpca/kde.hpp"
#include "rbpca/kernel.hpp"
#include "rbpca/rng.hpp"

namespace rbpca {

KpcaModel fit_kpca_baseline(const Eigen::Ref<const Eigen::MatrixXd>& X, const KpcaOptions& opts) {
  const Eigen::Index n = X.cols();
  if (n < 2) throw DataError("fit_kpca_baseline: need at least two samples");
  if (n > opts.sample_cap)
    throw DataError("fit_kpca_baseline: n=" + std::to_string(n) + " exceeds the cap of " +
                    std::to_string(opts.sample_cap));

  KpcaModel model;
  model.alpha = opts.alpha;
  model.normalizer = zscore_fit(X);
  model.Xn = model.normalizer.apply(X);
  model.c = opts.c ? *opts.c : median_heuristic(model.Xn, derive_seed(opts.seed, 0x6D65));

  const Eigen::MatrixXd K = exact_gaussian_kernel(model.Xn, GaussianKernelParams(model.c));
  model.row_mean = K.rowwise().mean();
  model.grand_mean = K.mean();

  // Double centering: Kbar = K - 1r' - r1' + g.
  Eigen::MatrixXd Kbar = K;
  Kbar.colwise() -= model.row_mean;
  Kbar.rowwise() -= model.row_mean.transpose();
  Kbar.array() += model.grand_mean;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(Kbar);
  if (solver.info() != Eigen::Success)
    throw NumericError("fit_kpca_baseline: eigensolver failed on the centered Gram matrix");
  Eigen::VectorXd mu = solver.eigenvalues().reverse().cwiseMax(0.0);
  Eigen::MatrixXd A = solver.eigenvectors().rowwise().reverse();

  const double mean_eig = mu.mean();
  int a = 0;
  for (Eigen::Index j = 0; j < mu.size(); ++j)
    if (mu[j] > mean_eig) ++a;
  model.a = std::max(a, 1);
  model.mu = mu.head(model.a);
  model.alphas = A.leftCols(model.a);
  for (Eigen::Index j = 0; j < model.alphas.cols(); ++j) {
    Eigen::Index idx = 0;
    model.alphas.col(j).cwiseAbs().maxCoeff(&idx);
    if (model.alphas(idx, j) < 0.0) model.alphas.col(j) = -model.alphas.col(j);
  }
  if (!(model.mu[0] > 0.0))
    throw NumericError("fit_kpca_baseline: degenerate kernel spectrum");

  // Training Q from the spectrum: Q_i = Kbar_ii - sum_j mu_j alpha_ji^2.
  model.train_q.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double q = Kbar(i, i);
    for (int j = 0; j < model.a; ++j) q -= model.mu[j] * model.alphas(i, j) * model.alphas(i, j);
    model.train_q[i] = q > 0.0 ? q : 0.0;
  }
  std::vector<double> qs(model.train_q.data(), model.train_q.data() + n);
  model.q_ucl = kde_threshold(qs, opts.alpha);
  return model;
}

ScoreResult score_kpca(const KpcaModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
  const Eigen::VectorXd xn = model.normalizer.apply_sample(x);

  Eigen::VectorXd kx =
      (-(model.Xn.colwise() - xn).colwise().squaredNorm() / model.c).array().exp();
  const double kmean = kx.mean();
  const Eigen::VectorXd kbar =
      kx.array() - kmean - model.row_mean.array() + model.grand_mean;
  const double kxx = 1.0 - 2.0 * kmean + model.grand_mean;

  double q = kxx;
  for (int j = 0; j < model.a; ++j) {
    const double t = model.alphas.col(j).dot(kbar) / std::sqrt(model.mu[j]);
    q -= t * t;
  }
  if (q < 0.0) q = 0.0;
  return {q, q > model.q_ucl};
}

}  // namespace rbpca
