#include "rbpca/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "rbpca/errors.hpp"
#include "rbpca/rng.hpp"

namespace rbpca {

Eigen::MatrixXd exact_gaussian_kernel(const Eigen::Ref<const Eigen::MatrixXd>& X,
                                      const GaussianKernelParams& params) {
  const Eigen::Index n = X.cols();
  if (n < 1) throw DataError("exact_gaussian_kernel: need at least one sample");
  Eigen::MatrixXd K(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    K(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d2 = (X.col(i) - X.col(j)).squaredNorm();
      const double v = std::exp(-d2 / params.c);
      K(i, j) = v;
      K(j, i) = v;
    }
  }
  return K;
}

Eigen::MatrixXd approx_kernel(const Eigen::Ref<const FeatureMatrix>& Z) {
  if (Z.size() == 0) throw DataError("approx_kernel: empty feature matrix");
  const Eigen::Index n = Z.rows();
  const double m = static_cast<double>(Z.cols());
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  K.selfadjointView<Eigen::Lower>().rankUpdate(Z, 1.0 / m);
  K.triangularView<Eigen::StrictlyUpper>() = K.transpose();
  return K;
}

double spectral_error(const Eigen::Ref<const Eigen::MatrixXd>& Ka,
                      const Eigen::Ref<const Eigen::MatrixXd>& Kb) {
  if (Ka.rows() != Kb.rows() || Ka.cols() != Kb.cols())
    throw DataError("spectral_error: size mismatch " + std::to_string(Ka.rows()) + " vs " +
                    std::to_string(Kb.rows()));
  const Eigen::MatrixXd A = Ka - Kb;
  const Eigen::Index n = A.rows();
  if (n == 0) return 0.0;

  // Power iteration on A^2: immune to the +/- extreme-eigenvalue pairing a
  // plain iteration on A can stall on.
  Rng rng(0x5EC7A11EULL);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.uniform(-1.0, 1.0);
  v.normalize();

  double estimate = 0.0;
  constexpr int kMaxIter = 10000;
  constexpr double kRelTol = 1e-8;
  for (int it = 0; it < kMaxIter; ++it) {
    Eigen::VectorXd w = A * v;
    const double next = w.norm();  // |A v| with v unit = sqrt(v'A^2 v)
    if (next == 0.0) return 0.0;
    Eigen::VectorXd u = A * w;
    const double un = u.norm();
    if (un == 0.0) return next;
    v = u / un;
    if (std::abs(next - estimate) <= kRelTol * std::max(next, 1e-300)) return next;
    estimate = next;
  }
  return estimate;
}

double theorem1_bound(int n, int m) {
  if (n < 2) throw std::invalid_argument("theorem1_bound: n must be >= 2, got " + std::to_string(n));
  if (m < 2) throw std::invalid_argument("theorem1_bound: m must be >= 2, got " + std::to_string(m));
  const double nd = n, md = m;
  const double logn = std::log(nd);
  const double t1 = std::sqrt(2.0) * nd * (md + 1.0) * logn / (md * (md - 1.0));
  const double t2 = 4.0 * std::sqrt(2.0) * nd * nd * (md + 1.0) * (md + 1.0) / (md * (md - 1.0) * (md - 1.0));
  const double t3 = std::sqrt(6.0 * nd * nd * logn / md + 12.0 * nd * nd * nd * (md + 1.0) / (md * (md - 1.0)));
  return t1 + t2 + t3;
}

double median_heuristic(const Eigen::Ref<const Eigen::MatrixXd>& X, std::uint64_t seed,
                        int subsample) {
  const Eigen::Index n = X.cols();
  if (n < 2) throw DataError("median_heuristic: need at least two samples");

  std::vector<Eigen::Index> idx(n);
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  const Eigen::Index take = std::min<Eigen::Index>(n, subsample);
  if (take < n) {
    Rng rng(seed);
    for (Eigen::Index i = 0; i < take; ++i) {
      const Eigen::Index j = i + static_cast<Eigen::Index>(rng.below(n - i));
      std::swap(idx[i], idx[j]);
    }
  }

  std::vector<double> d2;
  d2.reserve(static_cast<std::size_t>(take) * (take - 1) / 2);
  for (Eigen::Index a = 0; a < take; ++a)
    for (Eigen::Index b = a + 1; b < take; ++b)
      d2.push_back((X.col(idx[a]) - X.col(idx[b])).squaredNorm());

  const std::size_t half = d2.size() / 2;
  std::nth_element(d2.begin(), d2.begin() + half, d2.end());
  double med = d2[half];
  if (d2.size() % 2 == 0) {
    const double lower = *std::max_element(d2.begin(), d2.begin() + half);
    med = 0.5 * (lower + med);
  }
  if (!(med > 0.0)) throw DataError("median_heuristic: median pairwise distance is zero");
  return med;
}

}  // namespace rbpca
