#pragma once

#include <Eigen/Dense>

#include "rbpca/detector.hpp"

namespace rbpca {

struct TwoDOptions {
  StaticOptions base;
  int lag = 10;
};

// Two-dimensional monitor on time-lagged feature matrices
// A_t = (Z(x_{t-l}), ..., Z(x_t))', centered elementwise by the training
// mean matrix, with G = sum of Abar'Abar / (n-l) eigendecomposed.
struct TwoDModel {
  FeatureMap map;
  Normalizer normalizer;
  Eigen::MatrixXd A_mean;       // (l+1) x m
  Eigen::VectorXd eigenvalues;  // sigma, descending, clamped at 0
  Eigen::MatrixXd P;            // m x a
  int a = 0;
  double q_ucl = 0.0;
  double alpha = 0.0;
  int lag = 0;
  Eigen::VectorXd train_q;

  int input_dim() const { return map_dim(map); }
};

TwoDModel fit_2d(const Eigen::Ref<const Eigen::MatrixXd>& X, const TwoDOptions& opts);

// Q2D(t) = |Abar|_F^2 - |Abar P|_F^2 for a centered (l+1) x m matrix,
// clamped at 0.
double q2d_statistic(const TwoDModel& model, const Eigen::Ref<const Eigen::MatrixXd>& A_centered);

// Scores the time-lagged feature matrix whose rows are the uncentered
// feature vectors of x_{t-l}..x_t.
ScoreResult score_2d(const TwoDModel& model, const Eigen::Ref<const Eigen::MatrixXd>& A_t);

}  // namespace rbpca
