#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rbpca/detector.hpp"

namespace rbpca {

// Greedy farthest-point screening under cosine similarity: seeds with the
// minimum-cosine pair, then repeatedly adds the sample minimizing its
// maximum cosine to the selected set (ties to the lowest index). Returns
// w indices in original time order. Zero-norm samples are a data error.
std::vector<Eigen::Index> screen_dissimilar(const Eigen::Ref<const Eigen::MatrixXd>& X, int w);

enum class WindowPolicy {
  kDissimilar,  // cosine screening of the training set
  kRecent,      // most recent w samples
};

struct MovingWindowOptions {
  StaticOptions base;
  int w = 500;
  double delta_level = 0.8;  // quantile level for the update threshold
  WindowPolicy policy = WindowPolicy::kDissimilar;
};

// Adaptive monitor: detector fitted on a w-sample window, updated online
// when a non-alarming sample carries new information per the norm gap of
// its feature dot products against the window.
struct MovingWindowState {
  Eigen::MatrixXd window;  // D x w, time order
  Detector detector;
  double delta = 0.0;
  double delta_level = 0.0;
  int w = 0;
  long update_count = 0;
};

struct MwStepResult {
  double q;
  bool alarm;
  bool updated;
};

MovingWindowState mw_fit(const Eigen::Ref<const Eigen::MatrixXd>& X,
                         const MovingWindowOptions& opts);

// The update statistic |  |Zhat(x)| - |Z(x)|  | of the norm of the dot
// products of Z(x) against the stored window features.
double mw_update_statistic(const MovingWindowState& state,
                           const Eigen::Ref<const Eigen::VectorXd>& x);

// Scores x; on a normal sample whose statistic reaches delta the window
// drops its oldest sample, appends x, and the detector is refitted with
// the same feature map (new normalizer, centering mean and control limit).
MwStepResult mw_step(MovingWindowState& state, const Eigen::Ref<const Eigen::VectorXd>& x);

}  // namespace rbpca
