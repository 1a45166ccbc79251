#pragma once

#include <Eigen/Dense>

#include "rbpca/detector.hpp"

namespace rbpca {

// Time-lagged vector embedding: column t-l of the result is
// (x_{t-l}', ..., x_t')' for t = l+1..n (oldest block first), giving a
// D(l+1) x (n-l) matrix. Requires n > l >= 0.
Eigen::MatrixXd lag_embed(const Eigen::Ref<const Eigen::MatrixXd>& X, int l);

struct DynamicOptions {
  StaticOptions base;
  int lag = 2;
};

// Dynamic monitor: fit_static on the lagged dataset. At lag 0 this is
// bitwise identical to fit_static on X.
Detector fit_dynamic(const Eigen::Ref<const Eigen::MatrixXd>& X, const DynamicOptions& opts);

}  // namespace rbpca
