#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rbpca {

// An ordered stream of D-dimensional samples with optional 0/1 fault labels.
struct SampleStream {
  Eigen::MatrixXd samples;          // D x n, columns are samples in time order
  std::vector<int> labels;          // empty, or one flag per sample
  std::string provenance;

  Eigen::Index dim() const { return samples.rows(); }
  Eigen::Index size() const { return samples.cols(); }
  bool has_labels() const { return !labels.empty(); }
};

// Noise-free curve of the three-variable numerical example,
// (t, t^2 - 3t, -t^3 + 3t^2).
Eigen::Vector3d numerical_curve(double t);

struct GeneratorOptions {
  double t_min = 0.01;
  double t_max = 2.0;
  double noise_std = 0.1;  // e_j ~ N(0, 0.01)
};

// n samples of the numerical example; t ~ U[t_min, t_max) and noise draw
// from independent sub-streams of `seed`, so paired runs that only toggle
// noise_std share identical t values.
SampleStream gen_numerical_example(int n, std::uint64_t seed,
                                   const GeneratorOptions& opts = {});

// Step fault: x1 shifted by -0.5 from 1-based sample index `start` on.
// Labels mark the faulty region. Pure; the input is not modified.
SampleStream inject_fault1(const SampleStream& stream, int start);

// Ramp fault: 0.01 * (j - start + 1) added to x2 for 1-based sample
// numbers j >= start (0.01*(j-200) at the canonical start of 201).
SampleStream inject_fault2(const SampleStream& stream, int start);

// Per-variable z-score parameters estimated from training data.
struct Normalizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd std;  // strictly positive

  Eigen::MatrixXd apply(const Eigen::Ref<const Eigen::MatrixXd>& X) const;
  Eigen::VectorXd apply_sample(const Eigen::Ref<const Eigen::VectorXd>& x) const;
};

// Fits mean/std per variable; a zero-variance variable is a data error
// naming the offending index.
Normalizer zscore_fit(const Eigen::Ref<const Eigen::MatrixXd>& X);

// CSV with a header row; numeric cells; optional 0/1 label column
// (stripped from the features).
SampleStream load_labeled_csv(const std::string& path,
                              const std::optional<std::string>& label_column = std::nullopt);

// Writes a stream as CSV (17 significant digits; label column appended
// when present).
void save_csv(const std::string& path, const SampleStream& stream,
              const std::vector<std::string>& variable_names = {});

}  // namespace rbpca
