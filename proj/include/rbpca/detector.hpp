#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <variant>

#include "rbpca/datasets.hpp"
#include "rbpca/feature_map.hpp"
#include "rbpca/pca.hpp"

namespace rbpca {

using FeatureMap = std::variant<BernoulliFeatureMap, FourierFeatureMap>;

Eigen::VectorXd embed_with(const FeatureMap& map, const Eigen::Ref<const Eigen::VectorXd>& x);
FeatureMatrix embed_batch_with(const FeatureMap& map, const Eigen::Ref<const Eigen::MatrixXd>& X);
int map_feature_count(const FeatureMap& map);
int map_dim(const FeatureMap& map);

enum class MapType { kBernoulli, kFourier };

struct StaticOptions {
  int m = 150;
  double p = 0.05;
  std::optional<double> c;  // kernel width; median heuristic when absent
  double alpha = 0.99;
  std::uint64_t seed = 0;
  MapType map_type = MapType::kBernoulli;
};

// A fitted monitor: feature map, input normalizer, PCA model, feature mean
// and Q control limit. Immutable after fit; scoring is pure.
struct Detector {
  FeatureMap map;
  Normalizer normalizer;
  Eigen::VectorXd feature_mean;  // mean of the uncentered training features
  PcaModel pca;
  double q_ucl = 0.0;
  double alpha = 0.0;
  FeatureMatrix train_features;  // uncentered Z(X), n x m
  Eigen::VectorXd train_q;       // training Q values
  int lag = 0;                   // > 0 for detectors fitted on lagged vectors

  int input_dim() const { return map_dim(map); }
};

struct ScoreResult {
  double q;
  bool alarm;
};

// Modeling stage: z-score, build the map (width from `opts.c` or the median
// heuristic on the normalized data), embed, center, fit PCA, then set the
// control limit from the KDE of the training Q values.
Detector fit_static(const Eigen::Ref<const Eigen::MatrixXd>& X, const StaticOptions& opts);

// Refits everything except the feature map itself (moving-window updates
// reuse the map: only the data window changes).
Detector refit_with_map(const Eigen::Ref<const Eigen::MatrixXd>& X, const FeatureMap& map,
                        double alpha, int lag = 0);

// Online stage for one sample: normalize, embed, center with the stored
// training mean, Q against the stored limit.
ScoreResult score_online(const Detector& det, const Eigen::Ref<const Eigen::VectorXd>& x);

}  // namespace rbpca
