#include "etr/ablation.hpp"

#include <future>
#include <ostream>

#include <fmt/format.h>

#include "etr/corpus_io.hpp"
#include "etr/errors.hpp"

namespace etr {

namespace {

std::string model_label(ModelKind kind) {
  return kind == ModelKind::kGbdt ? "GBDT" : "MLP";
}

}  // namespace

TrainEvalResult train_and_evaluate(const FeatureCorpus& corpus,
                                   TrainConfig train_cfg, std::uint64_t seed,
                                   const EvaluationOptions& eval) {
  if (corpus.manifest.names.empty()) {
    throw EmptyFeatureSet("feature corpus has no columns");
  }
  TrainEvalResult r;
  r.split = split_dataset(corpus.vectors, seed);
  train_cfg.seed = seed;
  r.model = train(r.split.train, corpus.manifest, train_cfg);
  r.test_decisions.reserve(r.split.test.size());
  r.test_predictions.reserve(r.split.test.size());
  for (const auto& v : r.split.test) {
    const Prediction p = r.model.predict(v.values);
    r.test_predictions.push_back(p);
    r.test_decisions.push_back({v.pair.ref_id, v.pair.cand_id, p.decision});
  }
  r.report = evaluate(r.test_decisions, truth_from_vectors(r.split.test), eval);
  return r;
}

RecognitionResult run_recognition(const Ontology& ref, const Ontology& cand,
                                  const AlignmentTruth& truth,
                                  const RecognitionConfig& cfg,
                                  const LexicalResources& resources) {
  RecognitionResult out;
  out.run = run_pipeline(ref, cand, &truth, cfg.pipeline, resources);
  for (const auto& p : out.run.pruning.pruned) {
    if (p.label.value_or(false)) ++out.pruned_positive_count;
  }
  TrainEvalResult te =
      train_and_evaluate(out.run.corpus, cfg.train, cfg.seed, cfg.evaluation);
  out.split = std::move(te.split);
  out.model = std::move(te.model);
  out.test_decisions = std::move(te.test_decisions);
  out.test_predictions = std::move(te.test_predictions);
  out.report = std::move(te.report);
  return out;
}

std::vector<FeatureGroup> standard_feature_groups() {
  return {
      {"B-Sim_V", {feature::kSimV}},
      {"B-Sim_H", {feature::kSimH}},
      {"B-Sim_I", {feature::kSimI}},
      {"B-L", {feature::kSimH, feature::kSimV, feature::kSimI}},
  };
}

FeatureAblationTable ablate_features(const FeatureCorpus& corpus,
                                     const TrainConfig& train_cfg,
                                     const std::vector<FeatureGroup>& groups,
                                     std::uint64_t seed,
                                     const std::string& dataset,
                                     bool record_empty) {
  FeatureAblationTable table;
  table.dataset = dataset;
  table.level = corpus.level;
  table.model = train_cfg.kind;
  table.seed = seed;
  table.rows.push_back({"Backbone", {}, std::nullopt});
  for (const auto& g : groups) {
    for (const auto& name : g.removed) corpus.manifest.index_of(name);
    table.rows.push_back({g.name, g.removed, std::nullopt});
  }

  std::vector<std::future<std::optional<double>>> jobs;
  for (const auto& row : table.rows) {
    FeatureCorpus reduced = corpus.without(row.removed);
    if (reduced.manifest.names.empty()) {
      if (!record_empty) {
        throw EmptyFeatureSet(fmt::format(
            "removing {} leaves no features at {} level", row.name,
            to_string(corpus.level)));
      }
      std::promise<std::optional<double>> none;
      none.set_value(std::nullopt);
      jobs.push_back(none.get_future());
      continue;
    }
    jobs.push_back(std::async(
        std::launch::async,
        [reduced = std::move(reduced), train_cfg, seed]() -> std::optional<double> {
          return train_and_evaluate(reduced, train_cfg, seed).report.mi_f1;
        }));
  }
  for (std::size_t i = 0; i < jobs.size(); ++i) table.rows[i].mi_f1 = jobs[i].get();
  return table;
}

std::vector<double> default_lambda_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 9; ++i) grid.push_back(i / 10.0);
  return grid;
}

LambdaAblationTable ablate_lambda(const Ontology& ref, const Ontology& cand,
                                  const AlignmentTruth& truth,
                                  const RecognitionConfig& cfg,
                                  const std::vector<double>& lambdas,
                                  const LexicalResources& resources,
                                  const std::string& dataset) {
  LambdaAblationTable table;
  table.dataset = dataset;
  table.model = cfg.train.kind;
  table.seed = cfg.seed;
  table.lambdas = lambdas;
  std::vector<std::future<double>> jobs;
  for (double lambda : lambdas) {
    RecognitionConfig c = cfg;
    c.pipeline.specificity.lambda = lambda;
    c.pipeline.specificity.validate();
    jobs.push_back(std::async(std::launch::async, [&, c]() {
      return run_recognition(ref, cand, truth, c, resources).report.mi_f1;
    }));
  }
  for (auto& j : jobs) table.mi_f1.push_back(j.get());
  return table;
}

void write_feature_ablation(const FeatureAblationTable& table, std::ostream& out) {
  out << "# etr-ablation format_version=1 mode=features level="
      << to_string(table.level) << " seed=" << table.seed << '\n';
  out << "Dataset\tModel";
  for (const auto& r : table.rows) out << '\t' << r.name;
  out << '\n' << table.dataset << '\t' << model_label(table.model);
  for (const auto& r : table.rows) {
    out << '\t' << (r.mi_f1 ? fmt::format("{:.4f}", *r.mi_f1) : "-");
  }
  out << '\n';
}

void write_lambda_ablation(const LambdaAblationTable& table, std::ostream& out) {
  out << "# etr-ablation format_version=1 mode=lambda dataset=" << table.dataset
      << " seed=" << table.seed << '\n';
  out << "Factor\tModel";
  for (double l : table.lambdas) out << '\t' << format_real(l);
  out << "\nlambda\t" << model_label(table.model);
  for (double f : table.mi_f1) out << '\t' << fmt::format("{:.4f}", f);
  out << '\n';
}

}  // namespace etr
