#include "rbpca/model_io.hpp"

#include <fstream>
#include <json.hpp>
#include <vector>

#include "rbpca/errors.hpp"

namespace rbpca {

namespace {

using nlohmann::json;
constexpr int kFormatVersion = 1;

json vec_to_json(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd vec_from_json(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                           static_cast<Eigen::Index>(values.size()));
}

// Matrices are stored as row arrays.
json mat_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd mat_from_json(const json& j) {
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return {};
  const Eigen::Index cols = static_cast<Eigen::Index>(j.at(0).size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = j.at(i).at(c).get<double>();
  return m;
}

json map_to_json(const FeatureMap& map) {
  json j;
  if (const auto* bmap = std::get_if<BernoulliFeatureMap>(&map)) {
    j["type"] = "bernoulli";
    j["D"] = bmap->dim();
    j["m"] = bmap->feature_count();
    j["p"] = bmap->p();
    j["c"] = bmap->c();
    j["seed"] = bmap->seed();
    json supports = json::array();  // 0-based coordinate indices
    for (int f = 0; f < bmap->feature_count(); ++f) supports.push_back(bmap->support(f));
    j["supports"] = std::move(supports);
    j["phases"] = bmap->phases();
    return j;
  }
  const auto& fmap = std::get<FourierFeatureMap>(map);
  j["type"] = "fourier";
  j["D"] = fmap.dim();
  j["m"] = fmap.feature_count();
  j["c"] = fmap.c();
  j["seed"] = fmap.seed();
  j["directions"] = mat_to_json(fmap.directions());
  j["phases"] = fmap.phases();
  return j;
}

FeatureMap map_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "bernoulli") {
    return BernoulliFeatureMap(j.at("D").get<int>(), j.at("m").get<int>(),
                               j.at("p").get<double>(), j.at("c").get<double>(),
                               j.at("seed").get<std::uint64_t>(),
                               j.at("supports").get<std::vector<std::vector<int>>>(),
                               j.at("phases").get<std::vector<double>>());
  }
  if (type == "fourier") {
    return FourierFeatureMap(j.at("D").get<int>(), j.at("m").get<int>(),
                             j.at("c").get<double>(), j.at("seed").get<std::uint64_t>(),
                             mat_from_json(j.at("directions")),
                             j.at("phases").get<std::vector<double>>());
  }
  throw DataError("model file: unknown feature map type '" + type + "'");
}

json normalizer_to_json(const Normalizer& n) {
  return {{"mean", vec_to_json(n.mean)}, {"std", vec_to_json(n.std)}};
}

Normalizer normalizer_from_json(const json& j) {
  return {vec_from_json(j.at("mean")), vec_from_json(j.at("std"))};
}

json detector_to_json(const Detector& det) {
  json j;
  j["map"] = map_to_json(det.map);
  j["normalizer"] = normalizer_to_json(det.normalizer);
  j["feature_mean"] = vec_to_json(det.feature_mean);
  j["eigenvalues"] = vec_to_json(det.pca.eigenvalues);
  j["V"] = mat_to_json(det.pca.V);
  j["a"] = det.pca.a;
  j["q_ucl"] = det.q_ucl;
  j["alpha"] = det.alpha;
  j["lag"] = det.lag;
  return j;
}

// Training features are rebuilt only where scoring needs them (Eq. 13 in
// the moving-window monitor); embedding is deterministic so the rebuild
// is exact.
Detector detector_from_json(const json& j, const Eigen::MatrixXd* window = nullptr) {
  Detector det;
  det.map = map_from_json(j.at("map"));
  det.normalizer = normalizer_from_json(j.at("normalizer"));
  det.feature_mean = vec_from_json(j.at("feature_mean"));
  det.pca.eigenvalues = vec_from_json(j.at("eigenvalues"));
  det.pca.V = mat_from_json(j.at("V"));
  det.pca.a = j.at("a").get<int>();
  det.q_ucl = j.at("q_ucl").get<double>();
  det.alpha = j.at("alpha").get<double>();
  det.lag = j.at("lag").get<int>();
  if (window)
    det.train_features = embed_batch_with(det.map, det.normalizer.apply(*window));
  return det;
}

json config_to_json(const RunConfig& c) {
  json j;
  j["method"] = method_name(c.method);
  j["m"] = c.m;
  j["p"] = c.p;
  if (c.c) j["c"] = *c.c;
  j["alpha"] = c.alpha;
  j["l"] = c.l;
  j["w"] = c.w;
  j["delta_level"] = c.delta_level;
  j["mw_policy"] = c.mw_policy == WindowPolicy::kRecent ? "recent" : "dissimilar";
  j["seed"] = c.seed;
  return j;
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  c.method = method_from_name(j.at("method").get<std::string>());
  c.m = j.at("m").get<int>();
  c.p = j.at("p").get<double>();
  if (j.contains("c")) c.c = j.at("c").get<double>();
  c.alpha = j.at("alpha").get<double>();
  c.l = j.at("l").get<int>();
  c.w = j.at("w").get<int>();
  c.delta_level = j.at("delta_level").get<double>();
  c.mw_policy = j.at("mw_policy").get<std::string>() == "recent" ? WindowPolicy::kRecent
                                                                 : WindowPolicy::kDissimilar;
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

}  // namespace

void save_model(const std::string& path, const AnyModel& model, const RunConfig& config) {
  json j;
  j["format"] = "rbpca-model";
  j["version"] = kFormatVersion;
  j["config"] = config_to_json(config);

  if (const auto* det = std::get_if<Detector>(&model)) {
    j["kind"] = "detector";
    j["detector"] = detector_to_json(*det);
  } else if (const auto* twod = std::get_if<TwoDModel>(&model)) {
    j["kind"] = "2d";
    j["map"] = map_to_json(twod->map);
    j["normalizer"] = normalizer_to_json(twod->normalizer);
    j["A_mean"] = mat_to_json(twod->A_mean);
    j["sigma"] = vec_to_json(twod->eigenvalues);
    j["P"] = mat_to_json(twod->P);
    j["a"] = twod->a;
    j["q_ucl"] = twod->q_ucl;
    j["alpha"] = twod->alpha;
    j["lag"] = twod->lag;
  } else if (const auto* mw = std::get_if<MovingWindowState>(&model)) {
    j["kind"] = "moving-window";
    j["detector"] = detector_to_json(mw->detector);
    j["window"] = mat_to_json(mw->window);
    j["delta"] = mw->delta;
    j["delta_level"] = mw->delta_level;
    j["w"] = mw->w;
    j["update_count"] = mw->update_count;
  } else {
    const auto& kpca = std::get<KpcaModel>(model);
    j["kind"] = "kpca";
    j["normalizer"] = normalizer_to_json(kpca.normalizer);
    j["Xn"] = mat_to_json(kpca.Xn);
    j["c"] = kpca.c;
    j["alphas"] = mat_to_json(kpca.alphas);
    j["mu"] = vec_to_json(kpca.mu);
    j["row_mean"] = vec_to_json(kpca.row_mean);
    j["grand_mean"] = kpca.grand_mean;
    j["a"] = kpca.a;
    j["q_ucl"] = kpca.q_ucl;
    j["alpha"] = kpca.alpha;
  }

  std::ofstream out(path);
  if (!out) throw DataError("model file: cannot write '" + path + "'");
  out << j.dump(1) << '\n';
}

LoadedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("model file: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError("model file: '" + path + "' is not valid JSON: " + e.what());
  }

  if (j.value("format", "") != "rbpca-model")
    throw DataError("model file: '" + path + "' has no rbpca-model header");
  if (j.at("version").get<int>() != kFormatVersion)
    throw DataError("model file: version " + std::to_string(j.at("version").get<int>()) +
                    " not supported (expected " + std::to_string(kFormatVersion) + ")");

  LoadedModel loaded;
  loaded.config = config_from_json(j.at("config"));

  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "detector") {
    loaded.model = detector_from_json(j.at("detector"));
  } else if (kind == "2d") {
    TwoDModel twod;
    twod.map = map_from_json(j.at("map"));
    twod.normalizer = normalizer_from_json(j.at("normalizer"));
    twod.A_mean = mat_from_json(j.at("A_mean"));
    twod.eigenvalues = vec_from_json(j.at("sigma"));
    twod.P = mat_from_json(j.at("P"));
    twod.a = j.at("a").get<int>();
    twod.q_ucl = j.at("q_ucl").get<double>();
    twod.alpha = j.at("alpha").get<double>();
    twod.lag = j.at("lag").get<int>();
    loaded.model = std::move(twod);
  } else if (kind == "moving-window") {
    MovingWindowState mw;
    mw.window = mat_from_json(j.at("window"));
    mw.detector = detector_from_json(j.at("detector"), &mw.window);
    mw.delta = j.at("delta").get<double>();
    mw.delta_level = j.at("delta_level").get<double>();
    mw.w = j.at("w").get<int>();
    mw.update_count = j.at("update_count").get<long>();
    loaded.model = std::move(mw);
  } else if (kind == "kpca") {
    KpcaModel kpca;
    kpca.normalizer = normalizer_from_json(j.at("normalizer"));
    kpca.Xn = mat_from_json(j.at("Xn"));
    kpca.c = j.at("c").get<double>();
    kpca.alphas = mat_from_json(j.at("alphas"));
    kpca.mu = vec_from_json(j.at("mu"));
    kpca.row_mean = vec_from_json(j.at("row_mean"));
    kpca.grand_mean = j.at("grand_mean").get<double>();
    kpca.a = j.at("a").get<int>();
    kpca.q_ucl = j.at("q_ucl").get<double>();
    kpca.alpha = j.at("alpha").get<double>();
    loaded.model = std::move(kpca);
  } else {
    throw DataError("model file: unknown kind '" + kind + "'");
  }
  return loaded;
}

}  // namespace rbpca
