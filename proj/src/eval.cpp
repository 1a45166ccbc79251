#include "rbpca/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "rbpca/errors.hpp"
#include "rbpca/lagged.hpp"
#include "rbpca/rng.hpp"

namespace rbpca {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

SummaryStat summarize(const std::vector<double>& values) {
  SummaryStat s;
  if (values.empty()) return s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace

std::string method_name(Method method) {
  switch (method) {
    case Method::kStatic: return "static";
    case Method::kDynamic: return "dynamic";
    case Method::kTwoD: return "2d";
    case Method::kMovingWindow: return "moving-window";
    case Method::kKpcaBaseline: return "kpca-baseline";
    case Method::kRpcaFourier: return "rpca-fourier";
  }
  return "?";
}

Method method_from_name(const std::string& name) {
  if (name == "static") return Method::kStatic;
  if (name == "dynamic") return Method::kDynamic;
  if (name == "2d") return Method::kTwoD;
  if (name == "moving-window") return Method::kMovingWindow;
  if (name == "kpca-baseline") return Method::kKpcaBaseline;
  if (name == "rpca-fourier") return Method::kRpcaFourier;
  throw ConfigError("unknown method '" + name + "'");
}

DetectionRates fdr_far(const std::vector<int>& alarms, const std::vector<int>& labels,
                       int warming_count) {
  if (alarms.size() != labels.size())
    throw DataError("fdr_far: alarms and labels differ in length");
  long fault = 0, fault_hit = 0, normal = 0, normal_hit = 0;
  for (std::size_t k = static_cast<std::size_t>(warming_count); k < alarms.size(); ++k) {
    if (labels[k]) {
      ++fault;
      fault_hit += alarms[k] ? 1 : 0;
    } else {
      ++normal;
      normal_hit += alarms[k] ? 1 : 0;
    }
  }
  DetectionRates rates;
  if (fault > 0) rates.fdr = static_cast<double>(fault_hit) / static_cast<double>(fault);
  if (normal > 0) rates.far = static_cast<double>(normal_hit) / static_cast<double>(normal);
  return rates;
}

AnyModel fit_model(const RunConfig& config, const Eigen::Ref<const Eigen::MatrixXd>& X) {
  StaticOptions base{config.m, config.p, config.c, config.alpha, config.seed,
                     config.method == Method::kRpcaFourier ? MapType::kFourier
                                                           : MapType::kBernoulli};
  switch (config.method) {
    case Method::kStatic:
    case Method::kRpcaFourier:
      return fit_static(X, base);
    case Method::kDynamic:
      return fit_dynamic(X, DynamicOptions{base, config.l});
    case Method::kTwoD:
      return fit_2d(X, TwoDOptions{base, config.l});
    case Method::kMovingWindow:
      return mw_fit(X, MovingWindowOptions{base, config.w, config.delta_level,
                                           config.mw_policy});
    case Method::kKpcaBaseline:
      return fit_kpca_baseline(X, KpcaOptions{config.c, config.alpha, config.seed});
  }
  throw ConfigError("fit_model: unhandled method");
}

namespace {

int model_components(const AnyModel& model) {
  if (const auto* det = std::get_if<Detector>(&model)) return det->pca.a;
  if (const auto* twod = std::get_if<TwoDModel>(&model)) return twod->a;
  if (const auto* mw = std::get_if<MovingWindowState>(&model)) return mw->detector.pca.a;
  return std::get<KpcaModel>(model).a;
}

double model_threshold(const AnyModel& model) {
  if (const auto* det = std::get_if<Detector>(&model)) return det->q_ucl;
  if (const auto* twod = std::get_if<TwoDModel>(&model)) return twod->q_ucl;
  if (const auto* mw = std::get_if<MovingWindowState>(&model)) return mw->detector.q_ucl;
  return std::get<KpcaModel>(model).q_ucl;
}

}  // namespace

MonitoringReport run_method(const RunConfig& config, const SampleStream& train,
                            const SampleStream& test) {
  MonitoringReport report;
  report.method = method_name(config.method);
  report.seed = config.seed;

  const auto fit_start = Clock::now();
  AnyModel model = fit_model(config, train.samples);
  report.modeling_seconds = seconds_since(fit_start);
  report.retained_components = model_components(model);
  report.threshold = model_threshold(model);

  StreamMonitor monitor(std::move(model));
  const Eigen::Index n = test.size();
  report.samples.reserve(n);
  std::vector<int> alarms, labels;
  alarms.reserve(n);
  labels.reserve(n);

  const auto online_start = Clock::now();
  for (Eigen::Index k = 0; k < n; ++k) {
    const StepRecord step = monitor.feed(test.samples.col(k));
    SampleRecord rec;
    rec.index = static_cast<int>(k) + 1;
    rec.q = step.q;
    rec.threshold = step.threshold;
    rec.alarm = step.alarm;
    rec.warming = step.warming;
    rec.updated = step.updated;
    if (test.has_labels()) rec.label = test.labels[k];
    report.samples.push_back(rec);
    if (step.warming) ++report.warming_count;
    alarms.push_back(step.alarm ? 1 : 0);
    labels.push_back(test.has_labels() ? test.labels[k] : 0);
  }
  report.online_seconds_per_sample =
      n > 0 ? seconds_since(online_start) / static_cast<double>(n) : 0.0;
  report.update_count = monitor.update_count();

  if (test.has_labels()) {
    const DetectionRates rates = fdr_far(alarms, labels, report.warming_count);
    report.fdr = rates.fdr;
    report.far = rates.far;
  }
  return report;
}

MonitoringReport run_replicate(const NumericalExperiment& exp, int replicate) {
  RunConfig config = exp.config;
  config.seed = exp.config.seed + static_cast<std::uint64_t>(replicate);

  const SampleStream train =
      gen_numerical_example(exp.n_train, derive_seed(config.seed, 11));
  SampleStream test = gen_numerical_example(exp.n_test, derive_seed(config.seed, 12));
  if (exp.fault == 1) test = inject_fault1(test, exp.fault_start);
  else if (exp.fault == 2) test = inject_fault2(test, exp.fault_start);
  else test.labels.assign(exp.n_test, 0);

  return run_method(config, train, test);
}

MonteCarloSummary monte_carlo(const NumericalExperiment& exp, int replicates) {
  if (replicates < 1) throw std::invalid_argument("monte_carlo: replicates must be >= 1");
  MonteCarloSummary summary;
  summary.replicates = replicates;
  std::vector<double> mts, ots;
  for (int r = 0; r < replicates; ++r) {
    MonitoringReport rep;
    try {
      rep = run_replicate(exp, r);
    } catch (const std::exception& e) {
      throw NumericError("monte_carlo: replicate " + std::to_string(r) + " failed: " + e.what());
    }
    if (rep.fdr) summary.fdr_values.push_back(*rep.fdr);
    if (rep.far) summary.far_values.push_back(*rep.far);
    mts.push_back(rep.modeling_seconds);
    ots.push_back(rep.online_seconds_per_sample);
  }
  summary.fdr = summarize(summary.fdr_values);
  summary.far = summarize(summary.far_values);
  summary.modeling_seconds = summarize(mts);
  summary.online_seconds_per_sample = summarize(ots);
  return summary;
}

std::vector<BenchRow> bench_modeling(const std::vector<Method>& methods, int n_train,
                                     int n_test, std::uint64_t seed, int runs) {
  std::vector<BenchRow> rows;
  rows.reserve(methods.size());
  for (Method method : methods) {
    NumericalExperiment exp;
    exp.config.method = method;
    exp.config.seed = seed;
    exp.n_train = n_train;
    exp.n_test = n_test;
    exp.fault = 0;  // timing only; labels are irrelevant here
    std::vector<double> mts, ots;
    for (int r = 0; r < runs; ++r) {
      const MonitoringReport rep = run_replicate(exp, 0);
      mts.push_back(rep.modeling_seconds);
      ots.push_back(rep.online_seconds_per_sample);
    }
    rows.push_back({method_name(method), median_of(mts), median_of(ots)});
  }
  return rows;
}

}  // namespace rbpca
