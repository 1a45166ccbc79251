#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "rbpca/feature_map.hpp"

namespace rbpca {

// Exact Gaussian kernel matrix, [K]_ij = exp(-|x_i - x_j|^2 / c).
// Columns of X are samples. Symmetric with unit diagonal.
Eigen::MatrixXd exact_gaussian_kernel(const Eigen::Ref<const Eigen::MatrixXd>& X,
                                      const GaussianKernelParams& params);

// Random-feature approximation Khat = Z Z' / m. Symmetric PSD by construction.
Eigen::MatrixXd approx_kernel(const Eigen::Ref<const FeatureMatrix>& Z);

// Spectral norm of Ka - Kb (symmetric inputs), by power iteration on the
// squared difference; relative tolerance 1e-8, iteration cap 1e4.
double spectral_error(const Eigen::Ref<const Eigen::MatrixXd>& Ka,
                      const Eigen::Ref<const Eigen::MatrixXd>& Kb);

// Closed-form upper bound on E|Khat - K| in spectral norm, for n samples
// and m features. Requires n >= 2 and m >= 2.
double theorem1_bound(int n, int m);

// Kernel-width heuristic: median of pairwise squared distances over a
// seeded subsample of at most `subsample` columns of X.
double median_heuristic(const Eigen::Ref<const Eigen::MatrixXd>& X, std::uint64_t seed,
                        int subsample = 500);

}  // namespace rbpca
