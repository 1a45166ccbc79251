#pragma once

#include <Eigen/Dense>
#include <deque>
#include <variant>

#include "rbpca/detector.hpp"
#include "rbpca/kpca.hpp"
#include "rbpca/moving_window.hpp"
#include "rbpca/twod.hpp"

namespace rbpca {

using AnyModel = std::variant<Detector, TwoDModel, MovingWindowState, KpcaModel>;

struct StepRecord {
  double q = 0.0;
  double threshold = 0.0;
  bool alarm = false;
  bool warming = false;
  bool updated = false;  // moving-window refit happened on this sample
};

// Sequential per-sample driver over any fitted model. Keeps the l-deep
// history a dynamic or 2D model needs (the first l samples report
// `warming` and never alarm) and routes moving-window updates. Memory use
// is bounded by the model plus the lag buffer.
class StreamMonitor {
 public:
  explicit StreamMonitor(AnyModel model);

  StepRecord feed(const Eigen::Ref<const Eigen::VectorXd>& x);

  // Raw input dimension expected per sample.
  int sample_dim() const { return sample_dim_; }
  int warmup() const { return warmup_; }
  const AnyModel& model() const { return model_; }
  long update_count() const;

 private:
  AnyModel model_;
  int sample_dim_ = 0;
  int warmup_ = 0;                       // samples needed before scoring starts
  std::deque<Eigen::VectorXd> history_;  // raw samples (dynamic) or feature rows (2d)
};

}  // namespace rbpca
