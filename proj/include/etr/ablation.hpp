#pragma once
// End-to-end recognition runs and the two ablation harnesses built on them:
// a sweep over the specificity constant λ, and retraining with feature
// groups removed.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "etr/classifier.hpp"
#include "etr/evaluation.hpp"
#include "etr/pipeline.hpp"

namespace etr {

struct RecognitionConfig {
  PipelineConfig pipeline;
  TrainConfig train;  // train.seed is replaced by `seed`
  std::uint64_t seed = 0;
  EvaluationOptions evaluation;
};

struct RecognitionResult {
  PipelineRun run;
  DatasetSplit split;
  Model model;
  std::vector<PairDecision> test_decisions;
  std::vector<Prediction> test_predictions;
  EvaluationReport report;  // on the test split
  std::size_t pruned_positive_count = 0;  // true matches removed by pruning
};

// Split, train on the training part, evaluate on the test part.
struct TrainEvalResult {
  DatasetSplit split;
  Model model;
  std::vector<PairDecision> test_decisions;
  std::vector<Prediction> test_predictions;
  EvaluationReport report;
};

TrainEvalResult train_and_evaluate(const FeatureCorpus& corpus,
                                   TrainConfig train_cfg, std::uint64_t seed,
                                   const EvaluationOptions& eval = {});

RecognitionResult run_recognition(const Ontology& ref, const Ontology& cand,
                                  const AlignmentTruth& truth,
                                  const RecognitionConfig& cfg,
                                  const LexicalResources& resources = {});

// --- feature ablation ----------------------------------------------------

struct FeatureGroup {
  std::string name;
  std::vector<std::string> removed;
};

// B-Sim_V, B-Sim_H, B-Sim_I and B-L (all three property similarities).
std::vector<FeatureGroup> standard_feature_groups();

struct AblationRow {
  std::string name;
  std::vector<std::string> removed;
  std::optional<double> mi_f1;  // empty when no feature remained
};

struct FeatureAblationTable {
  std::string dataset;
  Level level = Level::kSchema;
  ModelKind model = ModelKind::kGbdt;
  std::uint64_t seed = 0;
  std::vector<AblationRow> rows;  // rows[0] is the backbone
};

// One train/evaluate run per group on the same split, plus the backbone.
// A group that removes every column throws EmptyFeatureSet, or yields an
// empty cell when `record_empty` is set.
FeatureAblationTable ablate_features(const FeatureCorpus& corpus,
                                     const TrainConfig& train_cfg,
                                     const std::vector<FeatureGroup>& groups,
                                     std::uint64_t seed,
                                     const std::string& dataset = "synthetic",
                                     bool record_empty = false);

// --- λ sweep --------------------------------------------------------------

struct LambdaAblationTable {
  std::string dataset;
  ModelKind model = ModelKind::kGbdt;
  std::uint64_t seed = 0;
  std::vector<double> lambdas;
  std::vector<double> mi_f1;  // one per lambda
};

// Reruns the whole pipeline for every λ.
LambdaAblationTable ablate_lambda(const Ontology& ref, const Ontology& cand,
                                  const AlignmentTruth& truth,
                                  const RecognitionConfig& cfg,
                                  const std::vector<double>& lambdas,
                                  const LexicalResources& resources = {},
                                  const std::string& dataset = "synthetic");

// Evenly spaced 0.1, 0.2, ..., 0.9.
std::vector<double> default_lambda_grid();

// Versioned tab-separated tables: groups or λ values across, one row per
// dataset/model.
void write_feature_ablation(const FeatureAblationTable& table, std::ostream& out);
void write_lambda_ablation(const LambdaAblationTable& table, std::ostream& out);

}  // namespace etr
