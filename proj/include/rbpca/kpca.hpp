#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

#include "rbpca/datasets.hpp"
#include "rbpca/detector.hpp"

namespace rbpca {

struct KpcaOptions {
  std::optional<double> c;  // median heuristic when absent
  double alpha = 0.99;
  std::uint64_t seed = 0;   // used only for the width heuristic subsample
  int sample_cap = 3000;    // dense n x n eigendecomposition guard
};

// Exact kernel-PCA monitor (accuracy/timing baseline): double-centered
// Gram matrix eigendecomposition with the feature-space Q statistic.
struct KpcaModel {
  Normalizer normalizer;
  Eigen::MatrixXd Xn;          // normalized training data, D x n
  double c = 0.0;
  Eigen::MatrixXd alphas;      // n x a unit eigenvectors of the centered Gram
  Eigen::VectorXd mu;          // their eigenvalues
  Eigen::VectorXd row_mean;    // row means of the uncentered K
  double grand_mean = 0.0;
  int a = 0;
  double q_ucl = 0.0;
  double alpha = 0.0;
  Eigen::VectorXd train_q;

  int input_dim() const { return static_cast<int>(Xn.rows()); }
};

KpcaModel fit_kpca_baseline(const Eigen::Ref<const Eigen::MatrixXd>& X, const KpcaOptions& opts);

ScoreResult score_kpca(const KpcaModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);

}  // namespace rbpca
