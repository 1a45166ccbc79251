#pragma once

#include <vector>

namespace rbpca {

// Interpolated order statistic at level p in [0,1] (R type-7 convention).
double empirical_quantile(std::vector<double> values, double p);

// Silverman's rule of thumb, h = 0.9 * min(std, IQR/1.34) * n^(-1/5).
// Falls back to the positive candidate if one of std/IQR degenerates;
// returns 0 for an all-equal sample.
double silverman_bandwidth(const std::vector<double>& values);

// Gaussian-KDE CDF at q for the given sample and bandwidth.
double kde_cdf(const std::vector<double>& values, double bandwidth, double q);

// Upper control limit: the q with KDE-CDF(q) = alpha (alpha is a confidence
// level, e.g. 0.99 for the upper 1% tail). Bisection over
// [min, max + 3h] to 1e-6 relative. Samples with n < 30 fall back to the
// empirical quantile with a warning on stderr.
double kde_threshold(const std::vector<double>& values, double alpha);

}  // namespace rbpca
