#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "rbpca/datasets.hpp"
#include "rbpca/errors.hpp"
#include "rbpca/feature_map.hpp"
#include "rbpca/kernel.hpp"
#include "rbpca/rng.hpp"

using namespace rbpca;

TEST_CASE("exact kernel basics") {
  Rng rng(1);
  Eigen::MatrixXd X(2, 3);
  X << 0.3, -1.1, 0.7, 0.9, 0.2, -0.4;
  const Eigen::MatrixXd K = exact_gaussian_kernel(X, GaussianKernelParams(1.0));

  for (int i = 0; i < 3; ++i) CHECK(K(i, i) == 1.0);
  // scalar-by-scalar oracle
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double d2 = 0.0;
      for (int r = 0; r < 2; ++r) d2 += (X(r, i) - X(r, j)) * (X(r, i) - X(r, j));
      CHECK(K(i, j) == doctest::Approx(std::exp(-d2)).epsilon(1e-14));
    }
  CHECK((K - K.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("analytic half-decay distance") {
  // |x-y|^2 = c ln 2  =>  K = 0.5
  const double c = 3.7;
  Eigen::MatrixXd X(1, 2);
  X << 0.0, std::sqrt(c * std::log(2.0));
  const Eigen::MatrixXd K = exact_gaussian_kernel(X, GaussianKernelParams(c));
  CHECK(K(0, 1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("approx kernel from a constant feature column") {
  FeatureMatrix Z(4, 1);
  Z.setConstant(std::sqrt(2.0));
  const Eigen::MatrixXd K = approx_kernel(Z);
  CHECK(K.rows() == 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(K(i, j) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("approx kernel is symmetric PSD with bounded entries") {
  const auto map = BernoulliFeatureMap::make(3, 60, 0.2, 1.0, 5);
  Rng rng(2);
  Eigen::MatrixXd X(3, 30);
  for (int k = 0; k < 30; ++k)
    for (int i = 0; i < 3; ++i) X(i, k) = rng.normal(0.0, 1.0);
  const Eigen::MatrixXd K = approx_kernel(map.embed_batch(X));

  CHECK((K - K.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(K.cwiseAbs().maxCoeff() <= 2.0 + 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(K);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-10 * eig.eigenvalues().maxCoeff());
}

TEST_CASE("entrywise concentration at m = 1e5") {
  // Fourier features against the exact Gaussian kernel; Bernoulli features
  // against their closed-form expected kernel (the Bernoulli estimator
  // carries a dimension-dependent bias relative to the Gaussian kernel).
  Rng rng(3);
  Eigen::MatrixXd X(3, 50);
  for (int k = 0; k < 50; ++k)
    for (int i = 0; i < 3; ++i) X(i, k) = rng.normal(0.0, 1.0);
  const double c = 2.0;
  const int m = 100000;

  const Eigen::MatrixXd K = exact_gaussian_kernel(X, GaussianKernelParams(c));
  const auto fmap = FourierFeatureMap::make(3, m, c, 77);
  const Eigen::MatrixXd Kf = approx_kernel(fmap.embed_batch(X));
  CHECK((Kf - K).cwiseAbs().maxCoeff() < 0.05);

  const double p = 0.05;
  const auto bmap = BernoulliFeatureMap::make(3, m, p, c, 78);
  const Eigen::MatrixXd Kb = approx_kernel(bmap.embed_batch(X));
  Eigen::MatrixXd Kexp(50, 50);
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 50; ++j)
      Kexp(i, j) = i == j ? 1.0 : oracle::bernoulli_pair_expectation(X.col(i), X.col(j), p, c);
  CHECK((Kb - Kexp).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("spectral error on closed-form cases") {
  Eigen::MatrixXd A = Eigen::MatrixXd::Random(6, 6);
  A = (A + A.transpose()).eval();
  CHECK(spectral_error(A, A) == 0.0);

  Eigen::MatrixXd D1 = Eigen::Vector2d(3.0, 1.0).asDiagonal();
  Eigen::MatrixXd D2 = Eigen::Vector2d(1.0, 1.0).asDiagonal();
  CHECK(spectral_error(D1, D2) == doctest::Approx(2.0).epsilon(1e-10));

  CHECK_THROWS_AS(spectral_error(D1, Eigen::MatrixXd::Zero(3, 3)), DataError);
}

TEST_CASE("spectral error agrees with a dense eigensolver") {
  Rng rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::MatrixXd A(20, 20), B(20, 20);
    for (int i = 0; i < 20; ++i)
      for (int j = 0; j < 20; ++j) {
        A(i, j) = rng.normal(0.0, 1.0);
        B(i, j) = rng.normal(0.0, 1.0);
      }
    A = 0.5 * (A + A.transpose()).eval();
    B = 0.5 * (B + B.transpose()).eval();
    const double expected = oracle::spectral_norm_dense(A - B);
    CHECK(spectral_error(A, B) == doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("power iteration survives a +/- paired spectrum") {
  Eigen::MatrixXd A = Eigen::Vector3d(5.0, -5.0, 1.0).asDiagonal();
  CHECK(spectral_error(A, Eigen::MatrixXd::Zero(3, 3)) == doctest::Approx(5.0).epsilon(1e-8));
}

TEST_CASE("theorem 1 bound: values, monotonicity, limit") {
  CHECK_THROWS_AS(theorem1_bound(1, 10), std::invalid_argument);
  CHECK_THROWS_AS(theorem1_bound(10, 1), std::invalid_argument);

  // frozen reference evaluations of the closed form
  CHECK(theorem1_bound(100, 200) == doctest::Approx(540.8126346265165).epsilon(1e-12));
  CHECK(theorem1_bound(200, 800) == doctest::Approx(635.2656939106932).epsilon(1e-12));
  CHECK(theorem1_bound(200, 4000) == doctest::Approx(212.98042835752665).epsilon(1e-12));

  // strictly decreasing in m on a grid
  double prev = theorem1_bound(150, 100);
  for (int m : {215, 464, 1000, 4642, 21544, 100000, 1000000}) {
    const double b = theorem1_bound(150, m);
    CHECK(b < prev);
    prev = b;
  }

  // every term vanishes as m grows: the bound tends to 0 with
  // sqrt(m)*bound(2,m) -> sqrt(24 ln 2 + 96)
  const double limit = std::sqrt(24.0 * std::log(2.0) + 96.0);
  CHECK(theorem1_bound(2, 1000000000) < 1e-3);
  CHECK(std::sqrt(1e6) * theorem1_bound(2, 1000000) == doctest::Approx(limit).epsilon(3e-2));
  CHECK(std::sqrt(1e9) * theorem1_bound(2, 1000000000) == doctest::Approx(limit).epsilon(1e-3));
}

TEST_CASE("median heuristic is deterministic and positive") {
  const SampleStream data = gen_numerical_example(800, 31);
  const Normalizer norm = zscore_fit(data.samples);
  const Eigen::MatrixXd Xn = norm.apply(data.samples);
  const double c1 = median_heuristic(Xn, 7);
  const double c2 = median_heuristic(Xn, 7);
  CHECK(c1 == c2);
  CHECK(c1 > 0.0);
  // subsampling keeps the estimate near the full-data median
  const double c_full = median_heuristic(Xn, 7, 800);
  CHECK(c1 == doctest::Approx(c_full).epsilon(0.25));
}

TEST_CASE("median spectral error is nonincreasing in m") {
  // Fourier features against the exact kernel; Bernoulli features against
  // their own expected kernel, the target they are unbiased for.
  const SampleStream data = gen_numerical_example(200, 42);
  const Eigen::MatrixXd Xn = zscore_fit(data.samples).apply(data.samples);
  const double c = median_heuristic(Xn, 7);
  const double p = 0.05;
  const Eigen::MatrixXd K = exact_gaussian_kernel(Xn, GaussianKernelParams(c));

  Eigen::MatrixXd Kbern(200, 200);
  for (int i = 0; i < 200; ++i)
    for (int j = 0; j < 200; ++j)
      Kbern(i, j) =
          i == j ? 1.0 : oracle::bernoulli_pair_expectation(Xn.col(i), Xn.col(j), p, c);

  auto median_err = [&](int m, bool fourier) {
    std::vector<double> errs;
    for (int s = 0; s < 20; ++s) {
      Eigen::MatrixXd Khat;
      if (fourier)
        Khat = approx_kernel(FourierFeatureMap::make(3, m, c, 300 + s).embed_batch(Xn));
      else
        Khat = approx_kernel(BernoulliFeatureMap::make(3, m, p, c, 300 + s).embed_batch(Xn));
      errs.push_back(spectral_error(Khat, fourier ? K : Kbern));
    }
    std::sort(errs.begin(), errs.end());
    return 0.5 * (errs[9] + errs[10]);
  };

  for (bool fourier : {true, false}) {
    double prev = median_err(50, fourier);
    for (int m : {200, 800}) {
      const double cur = median_err(m, fourier);
      CHECK(cur <= prev);
      prev = cur;
    }
  }
}
