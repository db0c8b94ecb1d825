#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "etr/classifier.hpp"
#include "etr/errors.hpp"

namespace etr {

using nlohmann::json;

namespace {

constexpr int kModelFormatVersion = 1;

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw ParseError(fmt::format("non-finite {} in model", what));
}

json tree_to_json(const RegressionTree& t) {
  json nodes = json::array();
  for (const auto& n : t.nodes) {
    nodes.push_back(json::array({n.feature, n.threshold, n.left, n.right, n.value}));
  }
  return nodes;
}

RegressionTree tree_from_json(const json& j, std::size_t n_features) {
  RegressionTree t;
  for (const auto& row : j) {
    TreeNode n;
    n.feature = row.at(0).get<int>();
    n.threshold = row.at(1).get<double>();
    n.left = row.at(2).get<int>();
    n.right = row.at(3).get<int>();
    n.value = row.at(4).get<double>();
    check_finite(n.threshold, "threshold");
    check_finite(n.value, "leaf value");
    t.nodes.push_back(n);
  }
  const int count = static_cast<int>(t.nodes.size());
  if (count == 0) throw ParseError("empty tree in model");
  for (int i = 0; i < count; ++i) {
    const TreeNode& n = t.nodes[i];
    if (n.feature < 0) continue;
    if (static_cast<std::size_t>(n.feature) >= n_features) {
      throw ManifestMismatch(fmt::format(
          "tree split on feature {} but manifest has {}", n.feature, n_features));
    }
    // Children always follow their parent, which also rules out cycles.
    if (n.left <= i || n.right <= i || n.left >= count || n.right >= count) {
      throw ParseError("tree child index out of range");
    }
  }
  return t;
}

std::vector<double> doubles_from_json(const json& j, std::size_t expected,
                                      const char* what) {
  auto v = j.get<std::vector<double>>();
  if (v.size() != expected) {
    throw ParseError(fmt::format("{} has {} values, expected {}", what,
                                 v.size(), expected));
  }
  for (double x : v) check_finite(x, what);
  return v;
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  return kind == ModelKind::kGbdt ? "gbdt" : "mlp";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "gbdt") return ModelKind::kGbdt;
  if (text == "mlp") return ModelKind::kMlp;
  throw ConfigError(fmt::format("unknown model kind '{}' (gbdt|mlp)", text));
}

void TrainConfig::validate() const {
  if (gbdt.n_trees <= 0 || gbdt.max_depth <= 0 || gbdt.min_samples_leaf <= 0 ||
      !(gbdt.learning_rate > 0.0) || !(gbdt.reg_lambda > 0.0)) {
    throw ConfigError("gbdt hyperparameters must be positive");
  }
  if (mlp.hidden <= 0 || mlp.epochs <= 0 || mlp.batch <= 0 || !(mlp.step > 0.0)) {
    throw ConfigError("mlp hyperparameters must be positive");
  }
  if (!(decision_threshold > 0.0 && decision_threshold < 1.0)) {
    throw ConfigError("decision threshold must lie in (0,1)");
  }
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double log_loss(std::span<const double> probabilities,
                std::span<const double> labels) {
  if (probabilities.size() != labels.size() || labels.empty()) {
    throw ValidationError("log_loss needs equally sized, non-empty inputs");
  }
  constexpr double kEps = 1e-15;
  double sum = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double p = std::clamp(probabilities[i], kEps, 1.0 - kEps);
    sum -= labels[i] * std::log(p) + (1.0 - labels[i]) * std::log(1.0 - p);
  }
  return sum / static_cast<double>(labels.size());
}

Model Model::from_gbdt(std::vector<std::string> manifest, TrainConfig cfg,
                       GbdtModel gbdt) {
  Model m;
  cfg.kind = ModelKind::kGbdt;
  m.manifest_ = std::move(manifest);
  m.config_ = cfg;
  m.params_ = std::move(gbdt);
  return m;
}

Model Model::from_mlp(std::vector<std::string> manifest, TrainConfig cfg,
                      MlpModel mlp) {
  Model m;
  cfg.kind = ModelKind::kMlp;
  if (mlp.n_inputs != manifest.size()) {
    throw ManifestMismatch("network input size differs from manifest");
  }
  m.manifest_ = std::move(manifest);
  m.config_ = cfg;
  m.params_ = std::move(mlp);
  return m;
}

Prediction Model::predict(std::span<const double> x) const {
  if (x.size() != manifest_.size()) {
    throw ManifestMismatch(fmt::format("model expects {} features, got {}",
                                       manifest_.size(), x.size()));
  }
  Prediction p;
  if (const auto* g = gbdt()) {
    p.probability = sigmoid(g->margin(x));
  } else {
    p.probability = mlp()->probability(x);
  }
  p.decision = p.probability >= config_.decision_threshold;
  return p;
}

std::vector<Prediction> Model::predict(const FeatureCorpus& corpus) const {
  if (corpus.manifest.names != manifest_) {
    throw ManifestMismatch(fmt::format(
        "corpus columns [{}] differ from model manifest [{}]",
        fmt::join(corpus.manifest.names, ","), fmt::join(manifest_, ",")));
  }
  std::vector<Prediction> out;
  out.reserve(corpus.vectors.size());
  for (const auto& v : corpus.vectors) out.push_back(predict(v.values));
  return out;
}

Model train(const std::vector<FeatureVector>& vectors,
            const FeatureManifest& manifest, const TrainConfig& cfg) {
  cfg.validate();
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  x.reserve(vectors.size());
  y.reserve(vectors.size());
  std::size_t positives = 0;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const auto& v = vectors[i];
    if (v.values.size() != manifest.names.size()) {
      throw ManifestMismatch(fmt::format(
          "vector {} has {} values, manifest has {}", i, v.values.size(),
          manifest.names.size()));
    }
    if (!v.pair.label) {
      throw ValidationError(fmt::format("training vector {} is unlabeled", i));
    }
    positives += *v.pair.label ? 1 : 0;
    x.push_back(v.values);
    y.push_back(*v.pair.label ? 1.0 : 0.0);
  }
  const std::size_t negatives = vectors.size() - positives;
  if (positives < 2 || negatives < 2) {
    throw DegenerateLabels(fmt::format(
        "need at least 2 examples per class, got {} positive and {} negative",
        positives, negatives));
  }
  Model m;
  m.manifest_ = manifest.names;
  m.config_ = cfg;
  if (cfg.kind == ModelKind::kGbdt) {
    m.params_ = train_gbdt(x, y, manifest.names, cfg.gbdt, &m.loss_trace_);
  } else {
    m.params_ = train_mlp(x, y, manifest.names, cfg.mlp, cfg.seed, &m.loss_trace_);
  }
  return m;
}

Model train(const FeatureCorpus& corpus, const TrainConfig& cfg) {
  return train(corpus.vectors, corpus.manifest, cfg);
}

void write_model(const Model& model, std::ostream& out) {
  const TrainConfig& c = model.config();
  json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["kind"] = std::string(to_string(model.kind()));
  doc["manifest"] = model.manifest();
  doc["decision_threshold"] = c.decision_threshold;
  doc["seed"] = c.seed;
  doc["hyperparams"] = {
      {"gbdt",
       {{"n_trees", c.gbdt.n_trees},
        {"max_depth", c.gbdt.max_depth},
        {"learning_rate", c.gbdt.learning_rate},
        {"min_samples_leaf", c.gbdt.min_samples_leaf},
        {"reg_lambda", c.gbdt.reg_lambda}}},
      {"mlp",
       {{"hidden", c.mlp.hidden},
        {"epochs", c.mlp.epochs},
        {"batch", c.mlp.batch},
        {"step", c.mlp.step}}}};
  json params;
  if (const auto* g = model.gbdt()) {
    params["base_score"] = g->base_score;
    params["learning_rate"] = g->learning_rate;
    params["n_trees"] = g->n_trees;
    params["trees"] = json::array();
    for (const auto& t : g->trees) params["trees"].push_back(tree_to_json(t));
  } else {
    const auto* m = model.mlp();
    params["layers"] = {m->n_inputs, m->hidden, 1};
    params["w1"] = m->w1;
    params["b1"] = m->b1;
    params["w2"] = m->w2;
    params["b2"] = m->b2;
  }
  doc["params"] = std::move(params);
  doc["loss_trace"] = model.loss_trace();
  out << doc.dump(1) << '\n';
}

Model read_model(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("model file is not valid JSON: {}", e.what()));
  }
  if (!doc.is_object() || !doc.contains("format_version")) {
    throw FormatVersionMismatch("model file lacks format_version");
  }
  if (doc["format_version"] != kModelFormatVersion) {
    throw FormatVersionMismatch(fmt::format("unsupported model format_version {}",
                                            doc["format_version"].dump()));
  }
  try {
    Model m;
    m.manifest_ = doc.at("manifest").get<std::vector<std::string>>();
    TrainConfig& c = m.config_;
    c.kind = parse_model_kind(doc.at("kind").get<std::string>());
    c.decision_threshold = doc.at("decision_threshold").get<double>();
    c.seed = doc.at("seed").get<std::uint64_t>();
    const json& hg = doc.at("hyperparams").at("gbdt");
    c.gbdt.n_trees = hg.at("n_trees").get<int>();
    c.gbdt.max_depth = hg.at("max_depth").get<int>();
    c.gbdt.learning_rate = hg.at("learning_rate").get<double>();
    c.gbdt.min_samples_leaf = hg.at("min_samples_leaf").get<int>();
    c.gbdt.reg_lambda = hg.at("reg_lambda").get<double>();
    const json& hm = doc.at("hyperparams").at("mlp");
    c.mlp.hidden = hm.at("hidden").get<int>();
    c.mlp.epochs = hm.at("epochs").get<int>();
    c.mlp.batch = hm.at("batch").get<int>();
    c.mlp.step = hm.at("step").get<double>();
    c.validate();

    const json& p = doc.at("params");
    if (c.kind == ModelKind::kGbdt) {
      GbdtModel g;
      g.base_score = p.at("base_score").get<double>();
      g.learning_rate = p.at("learning_rate").get<double>();
      g.n_trees = p.at("n_trees").get<int>();
      check_finite(g.base_score, "base score");
      for (const auto& t : p.at("trees")) {
        g.trees.push_back(tree_from_json(t, m.manifest_.size()));
      }
      m.params_ = std::move(g);
    } else {
      const auto layers = p.at("layers").get<std::vector<std::size_t>>();
      if (layers.size() != 3 || layers[2] != 1) {
        throw ParseError("network layers must be [inputs, hidden, 1]");
      }
      if (layers[0] != m.manifest_.size()) {
        throw ManifestMismatch("network input size differs from manifest");
      }
      MlpModel net = MlpModel::zeros(m.manifest_, layers[1]);
      net.w1 = doubles_from_json(p.at("w1"), net.w1.size(), "w1");
      net.b1 = doubles_from_json(p.at("b1"), net.b1.size(), "b1");
      net.w2 = doubles_from_json(p.at("w2"), net.w2.size(), "w2");
      net.b2 = p.at("b2").get<double>();
      check_finite(net.b2, "b2");
      m.params_ = std::move(net);
    }
    m.loss_trace_ = doc.at("loss_trace").get<std::vector<double>>();
    return m;
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("malformed model file: {}", e.what()));
  }
}

void save_model(const Model& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write model '{}'", path));
  write_model(model, out);
}

Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open model '{}'", path));
  return read_model(in);
}

}  // namespace etr
