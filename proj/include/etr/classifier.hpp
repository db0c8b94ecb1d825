#pragma once
// Binary match classifiers over feature vectors: a gradient-boosted tree
// ensemble and a one-hidden-layer feed-forward network. Both minimize
// log-loss and are fully determined by the training data and seed.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "etr/pipeline.hpp"

namespace etr {

enum class ModelKind { kGbdt, kMlp };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view text);  // "gbdt" | "mlp"

struct GbdtParams {
  int n_trees = 100;
  int max_depth = 3;
  double learning_rate = 0.1;
  int min_samples_leaf = 2;
  double reg_lambda = 1.0;  // L2 penalty on leaf values

  bool operator==(const GbdtParams&) const = default;
};

struct MlpParams {
  int hidden = 16;
  int epochs = 200;
  int batch = 32;
  double step = 0.01;  // Adam step size

  bool operator==(const MlpParams&) const = default;
};

struct TrainConfig {
  ModelKind kind = ModelKind::kGbdt;
  std::uint64_t seed = 0;
  GbdtParams gbdt;
  MlpParams mlp;
  double decision_threshold = 0.5;

  void validate() const;  // throws ConfigError
  bool operator==(const TrainConfig&) const = default;
};

double sigmoid(double z);
// Mean binary cross-entropy of probabilities against 0/1 labels.
double log_loss(std::span<const double> probabilities,
                std::span<const double> labels);

// --- gradient-boosted trees ----------------------------------------------

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;   // taken when x[feature] < threshold
  int right = -1;
  double value = 0.0;  // leaf output, shrinkage already applied

  bool operator==(const TreeNode&) const = default;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double evaluate(std::span<const double> x) const;
  bool operator==(const RegressionTree&) const = default;
};

struct GbdtModel {
  std::vector<RegressionTree> trees;
  double learning_rate = 0.1;
  int n_trees = 0;  // configured rounds; trees.size() may be smaller
  double base_score = 0.0;  // log-odds prior

  double margin(std::span<const double> x) const;
  bool operator==(const GbdtModel&) const = default;
};

// Returns the fitted ensemble; `loss_trace` receives the training log-loss
// before the first round and after every accepted round.
GbdtModel train_gbdt(const std::vector<std::vector<double>>& x,
                     const std::vector<double>& y,
                     const std::vector<std::string>& feature_names,
                     const GbdtParams& params,
                     std::vector<double>* loss_trace = nullptr);

// --- feed-forward network ------------------------------------------------

// Layers [n_inputs, hidden, 1]; relu hidden units, sigmoid output.
struct MlpModel {
  std::size_t n_inputs = 0;
  std::size_t hidden = 0;
  std::vector<double> w1;  // hidden x n_inputs, row-major
  std::vector<double> b1;  // hidden
  std::vector<double> w2;  // hidden
  double b2 = 0.0;
  // Input summation order (inputs sorted by feature name), so permuting the
  // manifest does not change floating-point results.
  std::vector<std::size_t> input_order;

  static MlpModel zeros(const std::vector<std::string>& feature_names,
                        std::size_t hidden);

  double probability(std::span<const double> x) const;

  // Flat parameter vector: w1, b1, w2, b2.
  std::size_t parameter_count() const;
  std::vector<double> parameters() const;
  void set_parameters(std::span<const double> flat);

  bool operator==(const MlpModel& o) const {
    return n_inputs == o.n_inputs && hidden == o.hidden && w1 == o.w1 &&
           b1 == o.b1 && w2 == o.w2 && b2 == o.b2;
  }
};

// Mean log-loss over the batch and its gradient in parameters() layout.
double mlp_loss_and_gradient(const MlpModel& model,
                             const std::vector<std::vector<double>>& x,
                             const std::vector<double>& y,
                             std::vector<double>* gradient);

MlpModel train_mlp(const std::vector<std::vector<double>>& x,
                   const std::vector<double>& y,
                   const std::vector<std::string>& feature_names,
                   const MlpParams& params, std::uint64_t seed,
                   std::vector<double>* loss_trace = nullptr);

// --- common model wrapper ------------------------------------------------

struct Prediction {
  double probability = 0.0;
  bool decision = false;
};

class Model {
 public:
  static Model from_gbdt(std::vector<std::string> manifest, TrainConfig cfg,
                         GbdtModel gbdt);
  static Model from_mlp(std::vector<std::string> manifest, TrainConfig cfg,
                        MlpModel mlp);

  ModelKind kind() const { return config_.kind; }
  const std::vector<std::string>& manifest() const { return manifest_; }
  const TrainConfig& config() const { return config_; }
  const std::vector<double>& loss_trace() const { return loss_trace_; }
  const GbdtModel* gbdt() const { return std::get_if<GbdtModel>(&params_); }
  const MlpModel* mlp() const { return std::get_if<MlpModel>(&params_); }

  // Throws ManifestMismatch when x has the wrong length.
  Prediction predict(std::span<const double> x) const;
  // Throws ManifestMismatch unless the corpus columns equal the manifest.
  std::vector<Prediction> predict(const FeatureCorpus& corpus) const;

  bool operator==(const Model&) const = default;

 private:
  friend Model train(const std::vector<FeatureVector>&,
                     const FeatureManifest&, const TrainConfig&);
  friend Model read_model(std::istream&);

  std::vector<std::string> manifest_;
  TrainConfig config_;
  std::variant<GbdtModel, MlpModel> params_;
  std::vector<double> loss_trace_;
};

// Requires labeled vectors with at least two of each class
// (DegenerateLabels) and values matching the manifest (ManifestMismatch).
Model train(const std::vector<FeatureVector>& vectors,
            const FeatureManifest& manifest, const TrainConfig& cfg);
Model train(const FeatureCorpus& corpus, const TrainConfig& cfg);

void write_model(const Model& model, std::ostream& out);
Model read_model(std::istream& in);
void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);

}  // namespace etr
