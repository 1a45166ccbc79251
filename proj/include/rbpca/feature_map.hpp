#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace rbpca {

// Rows are samples, columns are features; every entry lies in [-sqrt(2), sqrt(2)].
using FeatureMatrix = Eigen::MatrixXd;

struct GaussianKernelParams {
  double c;  // kernel width in squared-distance units, k(x,y)=exp(-|x-y|^2/c)
  explicit GaussianKernelParams(double width);
};

// Sparse random Bernoulli feature map
//   z_j(x) = sqrt(2) * cos( (sum_{i in supp_j} x_i - p * sum_i x_i) / gamma + u_j ),
//   gamma = sqrt(c*p*(1-p)/2).
// Supports are stored CSR-style (offsets into a flat index array) so a
// single embedding costs O(m*D*p + D).
class BernoulliFeatureMap {
 public:
  // Draws supports ~ Bernoulli(p) per coordinate and phases ~ U[0, 2pi),
  // reproducibly from `seed`.
  static BernoulliFeatureMap make(int dim, int m, double p, double c,
                                  std::uint64_t seed);

  // Assembles a map from explicit parameters (deserialization, tests).
  BernoulliFeatureMap(int dim, int m, double p, double c, std::uint64_t seed,
                      std::vector<std::vector<int>> supports,
                      std::vector<double> phases);

  BernoulliFeatureMap() = default;  // empty map, for variant/deserialization use

  Eigen::VectorXd embed(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  // Columns of X are samples; row k of the result is embed(X.col(k)).
  // Bit-identical to the per-sample loop.
  FeatureMatrix embed_batch(const Eigen::Ref<const Eigen::MatrixXd>& X) const;

  int dim() const { return dim_; }
  int feature_count() const { return m_; }
  double p() const { return p_; }
  double c() const { return c_; }
  std::uint64_t seed() const { return seed_; }
  std::vector<int> support(int j) const;
  const std::vector<double>& phases() const { return phases_; }
  std::size_t total_support_size() const { return indices_.size(); }

 private:
  int dim_ = 0;
  int m_ = 0;
  double p_ = 0.0;
  double c_ = 0.0;
  double inv_gamma_ = 0.0;
  std::uint64_t seed_ = 0;
  std::vector<int> offsets_;  // m+1 entries
  std::vector<int> indices_;  // sorted within each feature
  std::vector<double> phases_;
};

// Dense random Fourier feature map, z_j(x) = sqrt(2) cos(x'w_j + u_j) with
// w_j ~ N(0, 2I/c). The classical unbiased estimator of the Gaussian kernel.
class FourierFeatureMap {
 public:
  static FourierFeatureMap make(int dim, int m, double c, std::uint64_t seed);

  FourierFeatureMap(int dim, int m, double c, std::uint64_t seed,
                    Eigen::MatrixXd directions, std::vector<double> phases);

  FourierFeatureMap() = default;

  Eigen::VectorXd embed(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  FeatureMatrix embed_batch(const Eigen::Ref<const Eigen::MatrixXd>& X) const;

  int dim() const { return dim_; }
  int feature_count() const { return m_; }
  double c() const { return c_; }
  std::uint64_t seed() const { return seed_; }
  const Eigen::MatrixXd& directions() const { return W_; }
  const std::vector<double>& phases() const { return phases_; }

 private:
  int dim_ = 0;
  int m_ = 0;
  double c_ = 0.0;
  std::uint64_t seed_ = 0;
  Eigen::MatrixXd W_;  // m x dim
  std::vector<double> phases_;
};

}  // namespace rbpca
