#include "rbpca/detector.hpp"

#include <utility>
#include <vector>

#include "rbpca/errors.hpp"
#include "rbpca/kde.hpp"
#include "rbpca/kernel.hpp"
#include "rbpca/rng.hpp"

namespace rbpca {

Eigen::VectorXd embed_with(const FeatureMap& map, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return std::visit([&](const auto& fm) { return fm.embed(x); }, map);
}

FeatureMatrix embed_batch_with(const FeatureMap& map, const Eigen::Ref<const Eigen::MatrixXd>& X) {
  return std::visit([&](const auto& fm) { return fm.embed_batch(X); }, map);
}

int map_feature_count(const FeatureMap& map) {
  return std::visit([](const auto& fm) { return fm.feature_count(); }, map);
}

int map_dim(const FeatureMap& map) {
  return std::visit([](const auto& fm) { return fm.dim(); }, map);
}

namespace {

Detector fit_normalized(const Eigen::Ref<const Eigen::MatrixXd>& X, Normalizer norm,
                        FeatureMap map, double alpha, int lag) {
  Detector det;
  det.normalizer = std::move(norm);
  det.map = std::move(map);
  det.alpha = alpha;
  det.lag = lag;

  const Eigen::MatrixXd Xn = det.normalizer.apply(X);
  det.train_features = embed_batch_with(det.map, Xn);
  auto [Zbar, mean] = center(det.train_features);
  det.feature_mean = std::move(mean);
  det.pca = fit_pca(Zbar);

  const Eigen::Index n = Zbar.rows();
  det.train_q.resize(n);
  for (Eigen::Index k = 0; k < n; ++k)
    det.train_q[k] = q_statistic(det.pca, Zbar.row(k).transpose());

  std::vector<double> qs(det.train_q.data(), det.train_q.data() + n);
  det.q_ucl = kde_threshold(qs, alpha);
  return det;
}

}  // namespace

Detector fit_static(const Eigen::Ref<const Eigen::MatrixXd>& X, const StaticOptions& opts) {
  if (X.cols() < 2) throw DataError("fit_static: need at least two samples");
  if (!(opts.alpha > 0.0 && opts.alpha < 1.0))
    throw std::invalid_argument("fit_static: alpha must lie in (0,1)");
  if (opts.c && !(*opts.c > 0.0))
    throw std::invalid_argument("fit_static: c must be positive");

  Normalizer norm = zscore_fit(X);
  const Eigen::MatrixXd Xn = norm.apply(X);
  const double c = opts.c ? *opts.c : median_heuristic(Xn, derive_seed(opts.seed, 0x6D65
  ));

  FeatureMap map;
  const int dim = static_cast<int>(X.rows());
  if (opts.map_type == MapType::kBernoulli)
    map = BernoulliFeatureMap::make(dim, opts.m, opts.p, c, opts.seed);
  else
    map = FourierFeatureMap::make(dim, opts.m, c, opts.seed);

  return fit_normalized(X, std::move(norm), std::move(map), opts.alpha, 0);
}

Detector refit_with_map(const Eigen::Ref<const Eigen::MatrixXd>& X, const FeatureMap& map,
                        double alpha, int lag) {
  if (X.cols() < 2) throw DataError("refit_with_map: need at least two samples");
  return fit_normalized(X, zscore_fit(X), map, alpha, lag);
}

ScoreResult score_online(const Detector& det, const Eigen::Ref<const Eigen::VectorXd>& x) {
  const Eigen::VectorXd xn = det.normalizer.apply_sample(x);
  const Eigen::VectorXd zbar = embed_with(det.map, xn) - det.feature_mean;
  const double q = q_statistic(det.pca, zbar);
  return {q, q > det.q_ucl};
}

}  // namespace rbpca
