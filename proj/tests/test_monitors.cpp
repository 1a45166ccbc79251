#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "oracles.hpp"
#include "rbpca/datasets.hpp"
#include "rbpca/errors.hpp"
#include "rbpca/lagged.hpp"
#include "rbpca/moving_window.hpp"
#include "rbpca/rng.hpp"
#include "rbpca/stream_monitor.hpp"
#include "rbpca/twod.hpp"

using namespace rbpca;

namespace {

StaticOptions canonical(std::uint64_t seed) {
  StaticOptions opts;
  opts.m = 150;
  opts.p = 0.05;
  opts.c = 45.0;
  opts.alpha = 0.99;
  opts.seed = seed;
  return opts;
}

}  // namespace

TEST_CASE("lag_embed layout") {
  Eigen::MatrixXd X(1, 3);
  X << 1.0, 2.0, 3.0;
  // l = 0 is the identity
  CHECK(lag_embed(X, 0) == X);

  const Eigen::MatrixXd Y = lag_embed(X, 1);
  CHECK(Y.rows() == 2);
  CHECK(Y.cols() == 2);
  CHECK(Y(0, 0) == 1.0);  // oldest block first
  CHECK(Y(1, 0) == 2.0);
  CHECK(Y(0, 1) == 2.0);
  CHECK(Y(1, 1) == 3.0);

  CHECK_THROWS_AS(lag_embed(X, 3), DataError);
  CHECK_THROWS_AS(lag_embed(X, -1), std::invalid_argument);
}

TEST_CASE("lag_embed shapes and block structure") {
  Rng rng(1);
  for (const auto [d, n, l] : {std::tuple{2, 9, 3}, {4, 20, 0}, {3, 11, 5}}) {
    Eigen::MatrixXd X(d, n);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < d; ++i) X(i, k) = rng.normal(0.0, 1.0);
    const Eigen::MatrixXd Y = lag_embed(X, l);
    CHECK(Y.rows() == d * (l + 1));
    CHECK(Y.cols() == n - l);
    // each sample appears in exactly the l+1 consecutive lagged columns
    for (Eigen::Index t = l; t < n; ++t)
      for (int b = 0; b <= l; ++b)
        CHECK(Y.col(t - l).segment(b * d, d) == X.col(t - l + b));
  }
}

TEST_CASE("dynamic at lag 0 is bitwise static") {
  const SampleStream train = gen_numerical_example(400, 201);
  const Detector stat = fit_static(train.samples, canonical(21));
  const Detector dyn = fit_dynamic(train.samples, {canonical(21), 0});
  CHECK(dyn.q_ucl == stat.q_ucl);
  CHECK(dyn.train_q == stat.train_q);
  CHECK(dyn.pca.V == stat.pca.V);
  CHECK(dyn.feature_mean == stat.feature_mean);
}

TEST_CASE("streamed dynamic monitoring equals the lag_embed oracle") {
  const SampleStream train = gen_numerical_example(500, 202);
  const int l = 2;
  const Detector det = fit_dynamic(train.samples, {canonical(22), l});
  const SampleStream test = gen_numerical_example(60, 203);

  StreamMonitor monitor{AnyModel{det}};
  std::vector<StepRecord> stream_records;
  for (Eigen::Index k = 0; k < test.size(); ++k)
    stream_records.push_back(monitor.feed(test.samples.col(k)));

  // first l samples warm up without alarms
  for (int k = 0; k < l; ++k) {
    CHECK(stream_records[k].warming);
    CHECK_FALSE(stream_records[k].alarm);
  }
  const Eigen::MatrixXd Y = lag_embed(test.samples, l);
  for (Eigen::Index t = 0; t < Y.cols(); ++t) {
    const ScoreResult direct = score_online(det, Y.col(t));
    CHECK(stream_records[t + l].q == direct.q);
    CHECK(stream_records[t + l].alarm == direct.alarm);
  }
}

TEST_CASE("2d model basics") {
  const SampleStream train = gen_numerical_example(300, 204);
  const TwoDModel model = fit_2d(train.samples, {canonical(23), 4});
  CHECK(model.a >= 1);
  CHECK(model.q_ucl > 0.0);
  CHECK(model.A_mean.rows() == 5);
  CHECK(model.A_mean.cols() == 150);
  // P orthonormal
  const Eigen::MatrixXd PtP = model.P.transpose() * model.P;
  CHECK((PtP - Eigen::MatrixXd::Identity(model.a, model.a)).cwiseAbs().maxCoeff() <= 1e-8);
  // training Q nonnegative
  CHECK(model.train_q.minCoeff() >= 0.0);
}

TEST_CASE("G is symmetric PSD on random data") {
  Rng rng(2);
  Eigen::MatrixXd X(3, 80);
  for (int k = 0; k < 80; ++k)
    for (int i = 0; i < 3; ++i) X(i, k) = rng.normal(0.0, 1.0);
  StaticOptions opts = canonical(24);
  opts.m = 20;
  const TwoDModel model = fit_2d(X, {opts, 3});
  // eigenvalues of G are the model's spectrum; clamped nonnegative and sorted
  for (Eigen::Index j = 1; j < model.eigenvalues.size(); ++j)
    CHECK(model.eigenvalues[j] <= model.eigenvalues[j - 1]);
  CHECK(model.eigenvalues.minCoeff() >= 0.0);
}

TEST_CASE("q2d closed cases and the trace-form oracle") {
  TwoDModel model;
  model.lag = 1;
  model.a = 3;
  model.P = Eigen::MatrixXd::Identity(3, 3);

  // zero matrix and full projection both vanish
  CHECK(q2d_statistic(model, Eigen::MatrixXd::Zero(2, 3)) == 0.0);
  Eigen::MatrixXd A(2, 3);
  A << 1.0, -2.0, 0.5, 0.0, 1.5, -1.0;
  CHECK(q2d_statistic(model, A) == doctest::Approx(0.0).epsilon(1e-12));

  // rows inside span(P) vanish for a thin P
  Eigen::Vector3d v(1.0, 2.0, 2.0);
  v.normalize();
  model.P = v;
  model.a = 1;
  Eigen::MatrixXd inplane(2, 3);
  inplane.row(0) = 0.7 * v.transpose();
  inplane.row(1) = -1.3 * v.transpose();
  CHECK(q2d_statistic(model, inplane) == doctest::Approx(0.0).epsilon(1e-12));

  // 2x3 hand instance against the explicit trace form
  const Eigen::Matrix3d resid = Eigen::Matrix3d::Identity() - v * v.transpose();
  const double expected = (A * resid * A.transpose()).trace();
  CHECK(q2d_statistic(model, A) == doctest::Approx(expected).epsilon(1e-10));

  CHECK_THROWS_AS(q2d_statistic(model, Eigen::MatrixXd::Zero(5, 3)), DataError);
}

TEST_CASE("streamed 2d monitoring matches the batch path") {
  const SampleStream train = gen_numerical_example(400, 205);
  const int l = 3;
  const TwoDModel model = fit_2d(train.samples, {canonical(25), l});
  const SampleStream test = gen_numerical_example(40, 206);

  StreamMonitor monitor{AnyModel{model}};
  std::vector<StepRecord> records;
  for (Eigen::Index k = 0; k < test.size(); ++k)
    records.push_back(monitor.feed(test.samples.col(k)));
  for (int k = 0; k < l; ++k) CHECK(records[k].warming);

  const FeatureMatrix Z = embed_batch_with(model.map, model.normalizer.apply(test.samples));
  for (Eigen::Index t = l; t < test.size(); ++t) {
    const ScoreResult direct = score_2d(model, Z.middleRows(t - l, l + 1));
    CHECK(records[t].q == doctest::Approx(direct.q).epsilon(1e-12));
    CHECK(records[t].alarm == direct.alarm);
  }
}

TEST_CASE("screen_dissimilar basics") {
  Rng rng(3);
  Eigen::MatrixXd X(2, 8);
  for (int k = 0; k < 8; ++k)
    for (int i = 0; i < 2; ++i) X(i, k) = rng.normal(0.0, 1.0);

  const auto all = screen_dissimilar(X, 8);
  CHECK(all.size() == 8);
  for (int k = 0; k < 8; ++k) CHECK(all[k] == k);

  CHECK_THROWS_AS(screen_dissimilar(X, 9), std::invalid_argument);
  CHECK_THROWS_AS(screen_dissimilar(X, 0), std::invalid_argument);

  Eigen::MatrixXd with_zero = X;
  with_zero.col(3).setZero();
  CHECK_THROWS_WITH_AS(screen_dissimilar(with_zero, 4), doctest::Contains("3"), DataError);
}

TEST_CASE("screening seeds with the most opposed pair") {
  // x and -x have cosine -1, the minimum possible, so both must be kept
  Eigen::MatrixXd X(2, 5);
  X.col(0) = Eigen::Vector2d(1.0, 0.2);
  X.col(1) = Eigen::Vector2d(0.9, 0.3);
  X.col(2) = -X.col(0);
  X.col(3) = Eigen::Vector2d(0.5, 0.5);
  X.col(4) = Eigen::Vector2d(0.4, 0.6);
  const auto sel = screen_dissimilar(X, 2);
  CHECK(sel == std::vector<Eigen::Index>{0, 2});
}

TEST_CASE("greedy screening attains the exhaustive optimum on a hand instance") {
  // the opposed pair (0, 180) seeds the greedy and belongs to the optimal
  // 3-subset {0, 90, 180}, so greedy and exhaustive objectives coincide
  const double deg = M_PI / 180.0;
  const std::vector<double> angles{0.0, 180.0 * deg, 90.0 * deg, 45.0 * deg, 10.0 * deg,
                                   170.0 * deg};
  Eigen::MatrixXd X(2, 6);
  for (int k = 0; k < 6; ++k) X.col(k) = Eigen::Vector2d(std::cos(angles[k]), std::sin(angles[k]));

  const auto greedy = screen_dissimilar(X, 3);
  auto max_pair_cos = [&](const std::vector<Eigen::Index>& idx) {
    double worst = -2.0;
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a + 1; b < idx.size(); ++b)
        worst = std::max(worst, X.col(idx[a]).normalized().dot(X.col(idx[b]).normalized()));
    return worst;
  };

  double best = 2.0;
  for (Eigen::Index i = 0; i < 6; ++i)
    for (Eigen::Index j = i + 1; j < 6; ++j)
      for (Eigen::Index k = j + 1; k < 6; ++k)
        best = std::min(best, max_pair_cos({i, j, k}));
  CHECK(max_pair_cos(greedy) == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("mw_fit at w = n matches fit_static") {
  const SampleStream train = gen_numerical_example(150, 207);
  MovingWindowOptions opts{canonical(26), 150, 0.8, WindowPolicy::kDissimilar};
  const MovingWindowState state = mw_fit(train.samples, opts);
  const Detector direct = fit_static(train.samples, canonical(26));
  CHECK(state.detector.q_ucl == direct.q_ucl);
  CHECK(state.detector.train_q == direct.train_q);
  CHECK(state.delta > 0.0);
  CHECK(state.window.cols() == 150);
}

TEST_CASE("replaying a window sample is deterministic and quiet") {
  const SampleStream train = gen_numerical_example(300, 208);
  MovingWindowOptions opts{canonical(27), 120, 0.8, WindowPolicy::kRecent};
  const MovingWindowState state = mw_fit(train.samples, opts);

  // pick the calmest window sample so the replay cannot alarm
  Eigen::Index calm = 0;
  state.detector.train_q.minCoeff(&calm);
  const Eigen::VectorXd x = state.window.col(calm);

  MovingWindowState replay_a = state;
  MovingWindowState replay_b = state;
  const MwStepResult ra = mw_step(replay_a, x);
  const MwStepResult rb = mw_step(replay_b, x);
  CHECK(ra.q == rb.q);
  CHECK(ra.updated == rb.updated);
  CHECK_FALSE(ra.alarm);
  CHECK(ra.q == doctest::Approx(state.detector.train_q[calm]).epsilon(1e-8));
}

TEST_CASE("an infinite update threshold freezes the window") {
  const SampleStream train = gen_numerical_example(300, 209);
  MovingWindowOptions opts{canonical(28), 120, 0.8, WindowPolicy::kRecent};
  MovingWindowState state = mw_fit(train.samples, opts);
  state.delta = std::numeric_limits<double>::infinity();
  const Detector frozen = state.detector;

  const SampleStream test = gen_numerical_example(80, 210);
  for (Eigen::Index k = 0; k < test.size(); ++k) {
    const MwStepResult step = mw_step(state, test.samples.col(k));
    const ScoreResult direct = score_online(frozen, test.samples.col(k));
    CHECK(step.q == direct.q);
    CHECK(step.alarm == direct.alarm);
    CHECK_FALSE(step.updated);
  }
  CHECK(state.update_count == 0);
}

TEST_CASE("window cardinality is invariant across updates") {
  const SampleStream train = gen_numerical_example(400, 211);
  MovingWindowOptions opts{canonical(29), 150, 0.5, WindowPolicy::kRecent};
  MovingWindowState state = mw_fit(train.samples, opts);

  SampleStream test = gen_numerical_example(60, 212);
  test.samples.row(0).array() += 0.2;  // mild novelty to provoke updates
  long updates = 0;
  for (Eigen::Index k = 0; k < test.size(); ++k) {
    const MwStepResult step = mw_step(state, test.samples.col(k));
    if (step.updated) ++updates;
    CHECK(state.window.cols() == 150);
  }
  CHECK(state.update_count == updates);
  CHECK(updates > 0);
}

TEST_CASE("alarming samples never update the window") {
  const SampleStream train = gen_numerical_example(400, 213);
  MovingWindowOptions opts{canonical(30), 150, 0.8, WindowPolicy::kRecent};
  MovingWindowState state = mw_fit(train.samples, opts);
  state.detector.q_ucl = 0.0;  // everything alarms
  const Eigen::MatrixXd before = state.window;
  const MwStepResult step = mw_step(state, train.samples.col(7));
  CHECK(step.alarm);
  CHECK_FALSE(step.updated);
  CHECK(state.window == before);
}

TEST_CASE("adaptation on a drifting stream beats the frozen detector") {
  // slow additive sensor bias: window refits recompute the normalizer, so
  // the adaptive monitor re-centers while the frozen detector's false
  // alarms accumulate
  const int n = 800;
  const SampleStream train = gen_numerical_example(1000, 214);
  SampleStream drift = gen_numerical_example(n, 314);
  for (int k = 0; k < n; ++k)
    drift.samples.col(k).array() += 0.4 * k / static_cast<double>(n);

  const Detector frozen = fit_static(train.samples, canonical(31));
  int frozen_alarms = 0;
  for (int k = 0; k < n; ++k)
    if (score_online(frozen, drift.samples.col(k)).alarm) ++frozen_alarms;

  MovingWindowOptions mw_opts{canonical(31), 500, 0.8, WindowPolicy::kRecent};
  MovingWindowState state = mw_fit(train.samples, mw_opts);
  int adaptive_alarms = 0;
  for (int k = 0; k < n; ++k)
    if (mw_step(state, drift.samples.col(k)).alarm) ++adaptive_alarms;

  CHECK(state.update_count > 0);
  CHECK(adaptive_alarms < frozen_alarms);
}
