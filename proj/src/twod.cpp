#include "rbpca/twod.hpp"

#include <Eigen/Eigenvalues>
#include <string>
#include <vector>

#include "rbpca/errors.hpp"
#include "rbpca/kde.hpp"
#include "rbpca/kernel.hpp"
#include "rbpca/rng.hpp"

namespace rbpca {

TwoDModel fit_2d(const Eigen::Ref<const Eigen::MatrixXd>& X, const TwoDOptions& opts) {
  const int l = opts.lag;
  if (l < 0) throw std::invalid_argument("fit_2d: lag must be >= 0");
  const Eigen::Index n = X.cols();
  if (n <= l + 1) throw DataError("fit_2d: need more than l+1 samples");

  TwoDModel model;
  model.lag = l;
  model.alpha = opts.base.alpha;
  model.normalizer = zscore_fit(X);
  const Eigen::MatrixXd Xn = model.normalizer.apply(X);
  const double c = opts.base.c ? *opts.base.c
                               : median_heuristic(Xn, derive_seed(opts.base.seed, 0x6D65));
  const int dim = static_cast<int>(X.rows());
  if (opts.base.map_type == MapType::kBernoulli)
    model.map = BernoulliFeatureMap::make(dim, opts.base.m, opts.base.p, c, opts.base.seed);
  else
    model.map = FourierFeatureMap::make(dim, opts.base.m, c, opts.base.seed);

  const FeatureMatrix Z = embed_batch_with(model.map, Xn);  // n x m
  const int m = static_cast<int>(Z.cols());
  const Eigen::Index windows = n - l;

  // A_t rows are Z rows t-l..t; the elementwise mean over t reduces to
  // means of Z-row ranges.
  model.A_mean.resize(l + 1, m);
  for (int b = 0; b <= l; ++b)
    model.A_mean.row(b) =
        Z.middleRows(b, windows).colwise().mean();

  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(m, m);
  Eigen::MatrixXd Abar(l + 1, m);
  for (Eigen::Index t = l; t < n; ++t) {
    Abar = Z.middleRows(t - l, l + 1) - model.A_mean;
    G.selfadjointView<Eigen::Lower>().rankUpdate(Abar.transpose(), 1.0);
  }
  G /= static_cast<double>(windows);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(G.selfadjointView<Eigen::Lower>());
  if (solver.info() != Eigen::Success)
    throw NumericError("fit_2d: eigensolver failed on G");
  model.eigenvalues = solver.eigenvalues().reverse().cwiseMax(0.0);
  Eigen::MatrixXd P = solver.eigenvectors().rowwise().reverse();

  const double mean_eig = model.eigenvalues.mean();
  int a = 0;
  for (Eigen::Index j = 0; j < model.eigenvalues.size(); ++j)
    if (model.eigenvalues[j] > mean_eig) ++a;
  model.a = std::max(a, 1);
  model.P = P.leftCols(model.a);
  for (Eigen::Index j = 0; j < model.P.cols(); ++j) {
    Eigen::Index idx = 0;
    model.P.col(j).cwiseAbs().maxCoeff(&idx);
    if (model.P(idx, j) < 0.0) model.P.col(j) = -model.P.col(j);
  }

  model.train_q.resize(windows);
  for (Eigen::Index t = l; t < n; ++t) {
    Abar = Z.middleRows(t - l, l + 1) - model.A_mean;
    model.train_q[t - l] = q2d_statistic(model, Abar);
  }
  std::vector<double> qs(model.train_q.data(), model.train_q.data() + windows);
  model.q_ucl = kde_threshold(qs, model.alpha);
  return model;
}

double q2d_statistic(const TwoDModel& model, const Eigen::Ref<const Eigen::MatrixXd>& A_centered) {
  if (A_centered.rows() != model.lag + 1 || A_centered.cols() != model.P.rows())
    throw DataError("q2d_statistic: matrix shape " + std::to_string(A_centered.rows()) + "x" +
                    std::to_string(A_centered.cols()) + " does not match model");
  const double q = A_centered.squaredNorm() - (A_centered * model.P).squaredNorm();
  return q > 0.0 ? q : 0.0;
}

ScoreResult score_2d(const TwoDModel& model, const Eigen::Ref<const Eigen::MatrixXd>& A_t) {
  const double q = q2d_statistic(model, A_t - model.A_mean);
  return {q, q > model.q_ucl};
}

}  // namespace rbpca
