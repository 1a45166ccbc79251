#include "rbpca/stream_monitor.hpp"

#include <string>

#include "rbpca/errors.hpp"

namespace rbpca {

StreamMonitor::StreamMonitor(AnyModel model) : model_(std::move(model)) {
  if (const auto* det = std::get_if<Detector>(&model_)) {
    warmup_ = det->lag;
    sample_dim_ = det->lag > 0 ? det->input_dim() / (det->lag + 1) : det->input_dim();
  } else if (const auto* twod = std::get_if<TwoDModel>(&model_)) {
    warmup_ = twod->lag;
    sample_dim_ = twod->input_dim();
  } else if (const auto* mw = std::get_if<MovingWindowState>(&model_)) {
    sample_dim_ = static_cast<int>(mw->window.rows());
  } else {
    sample_dim_ = std::get<KpcaModel>(model_).input_dim();
  }
}

long StreamMonitor::update_count() const {
  if (const auto* mw = std::get_if<MovingWindowState>(&model_)) return mw->update_count;
  return 0;
}

StepRecord StreamMonitor::feed(const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != sample_dim_)
    throw DataError("monitor: sample has dimension " + std::to_string(x.size()) +
                    ", model expects " + std::to_string(sample_dim_));

  StepRecord rec;
  if (auto* det = std::get_if<Detector>(&model_)) {
    rec.threshold = det->q_ucl;
    if (det->lag == 0) {
      const ScoreResult s = score_online(*det, x);
      rec.q = s.q;
      rec.alarm = s.alarm;
      return rec;
    }
    history_.push_back(x);
    if (static_cast<int>(history_.size()) < det->lag + 1) {
      rec.warming = true;
      return rec;
    }
    Eigen::VectorXd y(det->input_dim());
    for (int b = 0; b <= det->lag; ++b)
      y.segment(b * sample_dim_, sample_dim_) = history_[b];
    history_.pop_front();
    const ScoreResult s = score_online(*det, y);
    rec.q = s.q;
    rec.alarm = s.alarm;
    return rec;
  }

  if (auto* twod = std::get_if<TwoDModel>(&model_)) {
    rec.threshold = twod->q_ucl;
    history_.push_back(embed_with(twod->map, twod->normalizer.apply_sample(x)));
    if (static_cast<int>(history_.size()) < twod->lag + 1) {
      rec.warming = true;
      return rec;
    }
    Eigen::MatrixXd A(twod->lag + 1, map_feature_count(twod->map));
    for (int b = 0; b <= twod->lag; ++b) A.row(b) = history_[b].transpose();
    history_.pop_front();
    const ScoreResult s = score_2d(*twod, A);
    rec.q = s.q;
    rec.alarm = s.alarm;
    return rec;
  }

  if (auto* mw = std::get_if<MovingWindowState>(&model_)) {
    rec.threshold = mw->detector.q_ucl;
    const MwStepResult s = mw_step(*mw, x);
    rec.q = s.q;
    rec.alarm = s.alarm;
    rec.updated = s.updated;
    return rec;
  }

  const auto& kpca = std::get<KpcaModel>(model_);
  rec.threshold = kpca.q_ucl;
  const ScoreResult s = score_kpca(kpca, x);
  rec.q = s.q;
  rec.alarm = s.alarm;
  return rec;
}

}  // namespace rbpca
