#pragma once

#include <Eigen/Dense>

#include "rbpca/feature_map.hpp"

namespace rbpca {

// PCA of the feature space. V holds the retained eigenvectors of
// R = Zbar' Zbar / (n-1), columns orthonormal, eigenvalues descending.
struct PcaModel {
  Eigen::VectorXd eigenvalues;  // all m, descending, clamped at 0
  Eigen::MatrixXd V;            // m x a
  int a = 0;                    // retained component count, >= 1
};

// Subtracts the column means; returns the centered matrix and the mean row.
// Requires n >= 2.
std::pair<FeatureMatrix, Eigen::VectorXd> center(const Eigen::Ref<const FeatureMatrix>& Z);

// Eigendecomposition of the feature covariance. Retains eigenvalues
// strictly above their mean (at least one). For m > n the decomposition
// runs on the n x n Gram matrix and eigenvectors are lifted back, which
// yields the same model. Eigenvector signs are fixed so the
// largest-magnitude coordinate is positive.
PcaModel fit_pca(const Eigen::Ref<const FeatureMatrix>& Zbar);

// Q (squared prediction error) of a centered feature vector:
// |zbar|^2 - |V'zbar|^2, clamped at 0.
double q_statistic(const PcaModel& model, const Eigen::Ref<const Eigen::VectorXd>& zbar);

}  // namespace rbpca
