#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rbpca/datasets.hpp"
#include "rbpca/stream_monitor.hpp"

namespace rbpca {

enum class Method { kStatic, kDynamic, kTwoD, kMovingWindow, kKpcaBaseline, kRpcaFourier };

std::string method_name(Method method);
Method method_from_name(const std::string& name);

// Full run configuration for one fit+monitor pipeline.
struct RunConfig {
  Method method = Method::kStatic;
  int m = 150;
  double p = 0.05;
  std::optional<double> c;  // kernel width; median heuristic when absent
  double alpha = 0.99;
  int l = 2;                // dynamic / 2d lag
  int w = 500;              // moving-window width
  double delta_level = 0.8;
  WindowPolicy mw_policy = WindowPolicy::kDissimilar;
  std::uint64_t seed = 0;
};

struct SampleRecord {
  int index = 0;  // 1-based position in the stream
  double q = 0.0;
  double threshold = 0.0;
  bool alarm = false;
  std::optional<int> label;
  bool warming = false;
  bool updated = false;
};

struct DetectionRates {
  std::optional<double> fdr;  // absent when the stream has no fault labels
  std::optional<double> far;  // absent when the stream has no normal samples
};

// Alarm rates over labelled samples, skipping the first warming_count.
DetectionRates fdr_far(const std::vector<int>& alarms, const std::vector<int>& labels,
                       int warming_count = 0);

struct MonitoringReport {
  std::string method;
  std::vector<SampleRecord> samples;
  std::optional<double> fdr;
  std::optional<double> far;
  int warming_count = 0;
  long update_count = 0;
  double modeling_seconds = 0.0;
  double online_seconds_per_sample = 0.0;
  std::uint64_t seed = 0;
  int retained_components = 0;
  double threshold = 0.0;
};

// Fits the configured model on the training stream.
AnyModel fit_model(const RunConfig& config, const Eigen::Ref<const Eigen::MatrixXd>& X);

// Streams the test samples through a fitted model and aggregates rates;
// timing covers fit and per-sample scoring only.
MonitoringReport run_method(const RunConfig& config, const SampleStream& train,
                            const SampleStream& test);

// Desk-scale experiment on the three-variable numerical example. The
// kernel width defaults to the value that reproduces the published
// operating point of all four monitors on this generator.
struct NumericalExperiment {
  RunConfig config;
  int n_train = 1000;
  int n_test = 500;
  int fault = 1;       // 0 = clean test stream
  int fault_start = 201;

  NumericalExperiment() { config.c = kNumericalExampleWidth; }
  static constexpr double kNumericalExampleWidth = 80.0;
};

MonitoringReport run_replicate(const NumericalExperiment& exp, int replicate);

struct SummaryStat {
  double mean = 0.0;
  double stddev = 0.0;
};

struct MonteCarloSummary {
  SummaryStat fdr;
  SummaryStat far;
  SummaryStat modeling_seconds;
  SummaryStat online_seconds_per_sample;
  std::vector<double> fdr_values;
  std::vector<double> far_values;
  int replicates = 0;
};

// Replicate seeds are config.seed + replicate index.
MonteCarloSummary monte_carlo(const NumericalExperiment& exp, int replicates);

struct BenchRow {
  std::string method;
  double modeling_seconds = 0.0;           // median of `runs`
  double online_seconds_per_sample = 0.0;  // median of `runs`
};

// Wall-clock modeling/online timing on the numerical example (median of
// `runs` fits and full monitoring passes per method).
std::vector<BenchRow> bench_modeling(const std::vector<Method>& methods, int n_train,
                                     int n_test, std::uint64_t seed, int runs = 5);

}  // namespace rbpca
