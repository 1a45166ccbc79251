#include "rbpca/moving_window.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "rbpca/errors.hpp"
#include "rbpca/kde.hpp"

namespace rbpca {

std::vector<Eigen::Index> screen_dissimilar(const Eigen::Ref<const Eigen::MatrixXd>& X, int w) {
  const Eigen::Index n = X.cols();
  if (w < 1 || w > n)
    throw std::invalid_argument("screen_dissimilar: w must lie in [1, n], got " +
                                std::to_string(w));

  Eigen::MatrixXd U(X.rows(), n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double norm = X.col(i).norm();
    if (!(norm > 0.0))
      throw DataError("screen_dissimilar: sample " + std::to_string(i) + " has zero norm");
    U.col(i) = X.col(i) / norm;
  }

  if (w == static_cast<int>(n)) {
    std::vector<Eigen::Index> all(n);
    for (Eigen::Index i = 0; i < n; ++i) all[i] = i;
    return all;
  }

  const Eigen::MatrixXd C = U.transpose() * U;

  // Seed with the pair of minimum cosine.
  Eigen::Index bi = 0, bj = 1;
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (C(i, j) < best) {
        best = C(i, j);
        bi = i;
        bj = j;
      }

  std::vector<Eigen::Index> selected{bi, bj};
  std::vector<char> in_set(n, 0);
  in_set[bi] = in_set[bj] = 1;
  Eigen::VectorXd maxcos = C.col(bi).cwiseMax(C.col(bj));

  while (static_cast<int>(selected.size()) < w) {
    Eigen::Index pick = -1;
    double low = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (in_set[i]) continue;
      if (maxcos[i] < low) {  // strict: ties fall to the lowest index
        low = maxcos[i];
        pick = i;
      }
    }
    selected.push_back(pick);
    in_set[pick] = 1;
    maxcos = maxcos.cwiseMax(C.col(pick));
  }

  std::sort(selected.begin(), selected.end());
  return selected;
}

namespace {

double update_statistic(const Detector& det, const Eigen::Ref<const Eigen::VectorXd>& x) {
  const Eigen::VectorXd z = embed_with(det.map, det.normalizer.apply_sample(x));
  const double zhat_norm = (det.train_features * z).norm();
  return std::abs(zhat_norm - z.norm());
}

double calibrate_delta(const MovingWindowState& state) {
  std::vector<double> stats(state.w);
  for (int k = 0; k < state.w; ++k)
    stats[k] = update_statistic(state.detector, state.window.col(k));
  return empirical_quantile(std::move(stats), state.delta_level);
}

}  // namespace

MovingWindowState mw_fit(const Eigen::Ref<const Eigen::MatrixXd>& X,
                         const MovingWindowOptions& opts) {
  const Eigen::Index n = X.cols();
  if (opts.w < 2 || opts.w > n)
    throw std::invalid_argument("mw_fit: w must lie in [2, n], got " + std::to_string(opts.w));
  if (!(opts.delta_level > 0.0 && opts.delta_level < 1.0))
    throw std::invalid_argument("mw_fit: delta_level must lie in (0,1)");

  MovingWindowState state;
  state.w = opts.w;
  state.delta_level = opts.delta_level;

  if (opts.policy == WindowPolicy::kDissimilar) {
    const std::vector<Eigen::Index> idx = screen_dissimilar(X, opts.w);
    state.window.resize(X.rows(), opts.w);
    for (int k = 0; k < opts.w; ++k) state.window.col(k) = X.col(idx[k]);
  } else {
    state.window = X.rightCols(opts.w);
  }

  state.detector = fit_static(state.window, opts.base);
  state.delta = calibrate_delta(state);
  return state;
}

double mw_update_statistic(const MovingWindowState& state,
                           const Eigen::Ref<const Eigen::VectorXd>& x) {
  return update_statistic(state.detector, x);
}

MwStepResult mw_step(MovingWindowState& state, const Eigen::Ref<const Eigen::VectorXd>& x) {
  const ScoreResult score = score_online(state.detector, x);
  if (score.alarm) return {score.q, true, false};

  if (update_statistic(state.detector, x) >= state.delta) {
    // New information: slide the window and refit with the same map.
    const Eigen::Index w = state.window.cols();
    Eigen::MatrixXd next(state.window.rows(), w);
    next.leftCols(w - 1) = state.window.rightCols(w - 1);
    next.col(w - 1) = x;
    state.window = std::move(next);
    state.detector = refit_with_map(state.window, state.detector.map, state.detector.alpha);
    ++state.update_count;
    return {score.q, false, true};
  }
  return {score.q, false, false};
}

}  // namespace rbpca
