#include "rbpca/lagged.hpp"

#include <stdexcept>
#include <string>

#include "rbpca/errors.hpp"

namespace rbpca {

Eigen::MatrixXd lag_embed(const Eigen::Ref<const Eigen::MatrixXd>& X, int l) {
  if (l < 0) throw std::invalid_argument("lag_embed: lag must be >= 0");
  const Eigen::Index d = X.rows();
  const Eigen::Index n = X.cols();
  if (n <= l)
    throw DataError("lag_embed: need more than l=" + std::to_string(l) + " samples, got " +
                    std::to_string(n));
  Eigen::MatrixXd Y(d * (l + 1), n - l);
  for (Eigen::Index t = l; t < n; ++t)
    for (int b = 0; b <= l; ++b)
      Y.col(t - l).segment(b * d, d) = X.col(t - l + b);
  return Y;
}

Detector fit_dynamic(const Eigen::Ref<const Eigen::MatrixXd>& X, const DynamicOptions& opts) {
  if (X.cols() <= opts.lag + 1)
    throw DataError("fit_dynamic: need more than l+1 samples");
  Detector det = fit_static(lag_embed(X, opts.lag), opts.base);
  det.lag = opts.lag;
  return det;
}

}  // namespace rbpca
