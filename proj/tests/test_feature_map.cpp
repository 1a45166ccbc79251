#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "rbpca/errors.hpp"
#include "rbpca/feature_map.hpp"
#include "rbpca/kernel.hpp"
#include "rbpca/rng.hpp"

using namespace rbpca;

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
}

TEST_CASE("map parameter validation") {
  CHECK_THROWS_AS(BernoulliFeatureMap::make(0, 5, 0.5, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(BernoulliFeatureMap::make(3, 0, 0.5, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(BernoulliFeatureMap::make(3, 5, 0.0, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(BernoulliFeatureMap::make(3, 5, 1.0, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(BernoulliFeatureMap::make(3, 5, 1.5, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(BernoulliFeatureMap::make(3, 5, 0.5, 0.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(GaussianKernelParams(-1.0), std::invalid_argument);
}

TEST_CASE("support statistics match Bernoulli(p)") {
  // mean total nonzero count over 500 seeds vs D*m*p, within 3 SE
  const int D = 3, m = 150;
  const double p = 0.05;
  double total = 0.0;
  const int seeds = 500;
  for (int s = 0; s < seeds; ++s)
    total += static_cast<double>(BernoulliFeatureMap::make(D, m, p, 1.0, 1000 + s).total_support_size());
  const double mean = total / seeds;
  const double se = std::sqrt(D * m * p * (1 - p)) / std::sqrt(static_cast<double>(seeds));
  CHECK(std::abs(mean - D * m * p) <= 3.0 * se);
}

TEST_CASE("near-degenerate Bernoulli probability") {
  // p=0.999, D=1: the single support should be {0} almost always
  int hits = 0;
  const int seeds = 10000;
  for (int s = 0; s < seeds; ++s) {
    const auto map = BernoulliFeatureMap::make(1, 1, 0.999, 1.0, s);
    if (map.support(0) == std::vector<int>{0}) ++hits;
  }
  const double freq = static_cast<double>(hits) / seeds;
  CHECK(std::abs(freq - 0.999) <= 5.0 * std::sqrt(0.999 * 0.001 / seeds));
}

TEST_CASE("regeneration from the same seed is identical") {
  const auto a = BernoulliFeatureMap::make(5, 3, 0.5, 2.0, 42);
  const auto b = BernoulliFeatureMap::make(5, 3, 0.5, 2.0, 42);
  for (int j = 0; j < 3; ++j) CHECK(a.support(j) == b.support(j));
  CHECK(a.phases() == b.phases());

  const auto f1 = FourierFeatureMap::make(4, 6, 2.0, 7);
  const auto f2 = FourierFeatureMap::make(4, 6, 2.0, 7);
  CHECK(f1.directions() == f2.directions());
  CHECK(f1.phases() == f2.phases());
}

TEST_CASE("phases lie in [0, 2pi)") {
  const auto map = BernoulliFeatureMap::make(3, 200, 0.3, 1.0, 9);
  for (double u : map.phases()) {
    CHECK(u >= 0.0);
    CHECK(u < 2.0 * M_PI);
  }
}

TEST_CASE("bernoulli_embed hand instance") {
  // D=2, x=(1,-1), support={0}, p=0.5, c=2, u=pi/2:
  // argument = (1 - 0.5*0)/sqrt(2*0.25/2) + pi/2 = 2 + pi/2
  const BernoulliFeatureMap map(2, 1, 0.5, 2.0, 0, {{0}}, {M_PI / 2.0});
  Eigen::Vector2d x(1.0, -1.0);
  const double expected = kSqrt2 * std::cos(2.0 + M_PI / 2.0);
  CHECK(map.embed(x)[0] == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("zero input with zero phase gives sqrt(2)") {
  const BernoulliFeatureMap bmap(3, 2, 0.3, 1.5, 0, {{0, 2}, {}}, {0.0, 0.0});
  const Eigen::Vector3d zero = Eigen::Vector3d::Zero();
  CHECK(bmap.embed(zero)[0] == doctest::Approx(kSqrt2).epsilon(1e-15));
  CHECK(bmap.embed(zero)[1] == doctest::Approx(kSqrt2).epsilon(1e-15));

  Eigen::MatrixXd W = Eigen::MatrixXd::Random(4, 3);
  const FourierFeatureMap fmap(3, 4, 1.5, 0, W, {0.0, 0.0, 0.0, 0.0});
  for (int j = 0; j < 4; ++j) CHECK(fmap.embed(zero)[j] == doctest::Approx(kSqrt2).epsilon(1e-15));
}

TEST_CASE("embedding boundedness") {
  const auto bmap = BernoulliFeatureMap::make(6, 80, 0.2, 0.7, 3);
  const auto fmap = FourierFeatureMap::make(6, 80, 0.7, 3);
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd x(6);
    for (int i = 0; i < 6; ++i) x[i] = rng.normal(0.0, 3.0);
    CHECK(bmap.embed(x).cwiseAbs().maxCoeff() <= kSqrt2 + 1e-12);
    CHECK(fmap.embed(x).cwiseAbs().maxCoeff() <= kSqrt2 + 1e-12);
  }
}

TEST_CASE("sparse embedding equals dense reconstruction") {
  const auto map = BernoulliFeatureMap::make(8, 120, 0.15, 2.5, 11);
  Rng rng(6);
  Eigen::VectorXd x(8);
  for (int i = 0; i < 8; ++i) x[i] = rng.normal(0.0, 1.0);
  const Eigen::VectorXd z = map.embed(x);
  for (int j = 0; j < 120; ++j) {
    Eigen::VectorXd b01 = Eigen::VectorXd::Zero(8);
    for (int idx : map.support(j)) b01[idx] = 1.0;
    const double dense = oracle::bernoulli_feature_dense(x, b01, 0.15, 2.5, map.phases()[j]);
    CHECK(std::abs(z[j] - dense) <= 1e-12);
  }
}

TEST_CASE("embed_batch equals the per-sample loop bit for bit") {
  const auto map = BernoulliFeatureMap::make(4, 30, 0.3, 1.2, 17);
  Rng rng(8);
  Eigen::MatrixXd X(4, 25);
  for (int k = 0; k < 25; ++k)
    for (int i = 0; i < 4; ++i) X(i, k) = rng.normal(0.0, 1.0);

  const FeatureMatrix Z = map.embed_batch(X);
  CHECK(Z.rows() == 25);
  CHECK(Z.cols() == 30);
  for (int k = 0; k < 25; ++k) {
    const Eigen::VectorXd z = map.embed(X.col(k));
    for (int j = 0; j < 30; ++j) CHECK(Z(k, j) == z[j]);
  }

  const FeatureMatrix one = map.embed_batch(X.col(3));
  CHECK(one.rows() == 1);
  for (int j = 0; j < 30; ++j) CHECK(one(0, j) == Z(3, j));
}

TEST_CASE("dimension mismatch raises a data error") {
  const auto map = BernoulliFeatureMap::make(3, 5, 0.3, 1.0, 0);
  CHECK_THROWS_AS(map.embed(Eigen::Vector2d(1, 2)), DataError);
  CHECK_THROWS_AS(map.embed_batch(Eigen::MatrixXd::Zero(2, 4)), DataError);
}

TEST_CASE("Fourier pair products are unbiased for the Gaussian kernel") {
  // mean over m=1e5 of z_j(x)z_j(y) within 3 standard errors of exp(-|x-y|^2/c)
  const int D = 3, m = 100000;
  const double c = 2.0;
  const auto map = FourierFeatureMap::make(D, m, c, 1234);
  Rng rng(9);
  Eigen::VectorXd x(D), y(D);
  for (int i = 0; i < D; ++i) {
    x[i] = rng.normal(0.0, 1.0);
    y[i] = rng.normal(0.0, 1.0);
  }
  const Eigen::VectorXd zx = map.embed(x), zy = map.embed(y);
  std::vector<double> prods(m);
  for (int j = 0; j < m; ++j) prods[j] = zx[j] * zy[j];
  const auto stat = oracle::mean_std(prods);
  const double target = std::exp(-(x - y).squaredNorm() / c);
  CHECK(std::abs(stat.mean - target) <= 3.0 * stat.sd / std::sqrt(static_cast<double>(m)));
}

TEST_CASE("Bernoulli pair products match their closed-form expectation") {
  // The Bernoulli estimator is unbiased for its own expected kernel
  // (characteristic-function product), which the Gaussian kernel only
  // approximates; see the closed form in oracles.hpp.
  const int D = 3, m = 100000;
  const double p = 0.05, c = 2.0;
  const auto map = BernoulliFeatureMap::make(D, m, p, c, 4321);
  Rng rng(10);
  Eigen::VectorXd x(D), y(D);
  for (int i = 0; i < D; ++i) {
    x[i] = rng.normal(0.0, 1.0);
    y[i] = rng.normal(0.0, 1.0);
  }
  const Eigen::VectorXd zx = map.embed(x), zy = map.embed(y);
  std::vector<double> prods(m);
  for (int j = 0; j < m; ++j) prods[j] = zx[j] * zy[j];
  const auto stat = oracle::mean_std(prods);
  const double target = oracle::bernoulli_pair_expectation(x, y, p, c);
  CHECK(std::abs(stat.mean - target) <= 3.5 * stat.sd / std::sqrt(static_cast<double>(m)));
}
