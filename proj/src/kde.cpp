#include "rbpca/kde.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>

#include "rbpca/errors.hpp"

namespace rbpca {

double empirical_quantile(std::vector<double> values, double p) {
  if (values.empty()) throw DataError("empirical_quantile: empty sample");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("empirical_quantile: level must lie in [0,1]");
  std::sort(values.begin(), values.end());
  const double pos = p * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

double silverman_bandwidth(const std::vector<double>& values) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  const double iqr =
      (empirical_quantile(values, 0.75) - empirical_quantile(values, 0.25)) / 1.34;

  double spread = 0.0;
  if (sd > 0.0 && iqr > 0.0) spread = std::min(sd, iqr);
  else if (sd > 0.0) spread = sd;
  else if (iqr > 0.0) spread = iqr;
  else return 0.0;
  return 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
}

double kde_cdf(const std::vector<double>& values, double bandwidth, double q) {
  const double inv = 1.0 / (bandwidth * std::sqrt(2.0));
  double acc = 0.0;
  for (double v : values) acc += 0.5 * (1.0 + std::erf((q - v) * inv));
  return acc / static_cast<double>(values.size());
}

double kde_threshold(const std::vector<double>& values, double alpha) {
  if (values.empty()) throw DataError("kde_threshold: empty sample");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("kde_threshold: alpha must lie in (0,1), got " +
                                std::to_string(alpha));
  if (values.size() < 30) {
    std::cerr << "kde_threshold: only " << values.size()
              << " values (< 30), falling back to the empirical quantile\n";
    return empirical_quantile(values, alpha);
  }

  const double h = silverman_bandwidth(values);
  const auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
  if (h == 0.0) return *mx_it;  // degenerate all-equal sample

  double lo = *mn_it;
  double hi = *mx_it + 3.0 * h;
  if (kde_cdf(values, h, hi) < alpha) return hi;  // alpha beyond the bracket
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (kde_cdf(values, h, mid) < alpha) lo = mid;
    else hi = mid;
    if (hi - lo <= 1e-6 * std::max({std::abs(hi), std::abs(lo), 1e-30})) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace rbpca
