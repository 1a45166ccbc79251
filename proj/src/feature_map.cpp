#include "rbpca/feature_map.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rbpca/errors.hpp"
#include "rbpca/rng.hpp"

namespace rbpca {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;

void check_map_params(int dim, int m, double p, double c, bool bernoulli) {
  if (dim < 1) throw std::invalid_argument("feature map: D must be >= 1, got " + std::to_string(dim));
  if (m < 1) throw std::invalid_argument("feature map: m must be >= 1, got " + std::to_string(m));
  if (bernoulli && !(p > 0.0 && p < 1.0))
    throw std::invalid_argument("feature map: p must lie in (0,1), got " + std::to_string(p));
  if (!(c > 0.0)) throw std::invalid_argument("feature map: c must be positive, got " + std::to_string(c));
}
}  // namespace

GaussianKernelParams::GaussianKernelParams(double width) : c(width) {
  if (!(c > 0.0))
    throw std::invalid_argument("GaussianKernelParams: c must be positive, got " + std::to_string(c));
}

BernoulliFeatureMap BernoulliFeatureMap::make(int dim, int m, double p, double c,
                                              std::uint64_t seed) {
  check_map_params(dim, m, p, c, true);
  Rng support_rng(derive_seed(seed, 1));
  Rng phase_rng(derive_seed(seed, 2));

  std::vector<std::vector<int>> supports(m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < dim; ++i) {
      if (support_rng.bernoulli(p)) supports[j].push_back(i);
    }
  }
  std::vector<double> phases(m);
  for (int j = 0; j < m; ++j) phases[j] = phase_rng.uniform(0.0, 2.0 * M_PI);

  return BernoulliFeatureMap(dim, m, p, c, seed, std::move(supports), std::move(phases));
}

BernoulliFeatureMap::BernoulliFeatureMap(int dim, int m, double p, double c,
                                         std::uint64_t seed,
                                         std::vector<std::vector<int>> supports,
                                         std::vector<double> phases)
    : dim_(dim), m_(m), p_(p), c_(c), seed_(seed), phases_(std::move(phases)) {
  check_map_params(dim, m, p, c, true);
  if (static_cast<int>(supports.size()) != m || static_cast<int>(phases_.size()) != m)
    throw std::invalid_argument("BernoulliFeatureMap: supports/phases size must equal m");
  inv_gamma_ = 1.0 / std::sqrt(c_ * p_ * (1.0 - p_) / 2.0);
  offsets_.reserve(m + 1);
  offsets_.push_back(0);
  for (const auto& s : supports) {
    int prev = -1;
    for (int idx : s) {
      if (idx < 0 || idx >= dim)
        throw std::invalid_argument("BernoulliFeatureMap: support index out of range");
      if (idx <= prev)
        throw std::invalid_argument("BernoulliFeatureMap: support indices must be strictly increasing");
      prev = idx;
      indices_.push_back(idx);
    }
    offsets_.push_back(static_cast<int>(indices_.size()));
  }
}

std::vector<int> BernoulliFeatureMap::support(int j) const {
  return {indices_.begin() + offsets_[j], indices_.begin() + offsets_[j + 1]};
}

Eigen::VectorXd BernoulliFeatureMap::embed(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != dim_)
    throw DataError("bernoulli_embed: sample has dimension " + std::to_string(x.size()) +
                    ", map expects " + std::to_string(dim_));
  const double shift = p_ * x.sum();  // p * x'1, computed once per sample
  Eigen::VectorXd z(m_);
  for (int j = 0; j < m_; ++j) {
    double dot = 0.0;
    for (int k = offsets_[j]; k < offsets_[j + 1]; ++k) dot += x[indices_[k]];
    const double arg = (dot - shift) * inv_gamma_ + phases_[j];
    z[j] = kSqrt2 * std::cos(arg);
  }
  assert(z.cwiseAbs().maxCoeff() <= kSqrt2 + 1e-12);
  return z;
}

FeatureMatrix BernoulliFeatureMap::embed_batch(const Eigen::Ref<const Eigen::MatrixXd>& X) const {
  if (X.rows() != dim_)
    throw DataError("embed_batch: data has dimension " + std::to_string(X.rows()) +
                    ", map expects " + std::to_string(dim_));
  FeatureMatrix Z(X.cols(), m_);
  for (Eigen::Index k = 0; k < X.cols(); ++k) Z.row(k) = embed(X.col(k)).transpose();
  return Z;
}

FourierFeatureMap FourierFeatureMap::make(int dim, int m, double c, std::uint64_t seed) {
  check_map_params(dim, m, 0.5, c, false);
  Rng dir_rng(derive_seed(seed, 1));
  Rng phase_rng(derive_seed(seed, 2));

  const double stddev = std::sqrt(2.0 / c);
  Eigen::MatrixXd W(m, dim);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < dim; ++i) W(j, i) = dir_rng.normal(0.0, stddev);
  std::vector<double> phases(m);
  for (int j = 0; j < m; ++j) phases[j] = phase_rng.uniform(0.0, 2.0 * M_PI);

  return FourierFeatureMap(dim, m, c, seed, std::move(W), std::move(phases));
}

FourierFeatureMap::FourierFeatureMap(int dim, int m, double c, std::uint64_t seed,
                                     Eigen::MatrixXd directions, std::vector<double> phases)
    : dim_(dim), m_(m), c_(c), seed_(seed), W_(std::move(directions)), phases_(std::move(phases)) {
  check_map_params(dim, m, 0.5, c, false);
  if (W_.rows() != m || W_.cols() != dim || static_cast<int>(phases_.size()) != m)
    throw std::invalid_argument("FourierFeatureMap: directions/phases shape mismatch");
}

Eigen::VectorXd FourierFeatureMap::embed(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != dim_)
    throw DataError("fourier_embed: sample has dimension " + std::to_string(x.size()) +
                    ", map expects " + std::to_string(dim_));
  Eigen::VectorXd z = W_ * x;
  for (int j = 0; j < m_; ++j) z[j] = kSqrt2 * std::cos(z[j] + phases_[j]);
  return z;
}

FeatureMatrix FourierFeatureMap::embed_batch(const Eigen::Ref<const Eigen::MatrixXd>& X) const {
  if (X.rows() != dim_)
    throw DataError("embed_batch: data has dimension " + std::to_string(X.rows()) +
                    ", map expects " + std::to_string(dim_));
  FeatureMatrix Z(X.cols(), m_);
  for (Eigen::Index k = 0; k < X.cols(); ++k) Z.row(k) = embed(X.col(k)).transpose();
  return Z;
}

}  // namespace rbpca
