#include "etr/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "etr/ablation.hpp"
#include "etr/classifier.hpp"
#include "etr/corpus_io.hpp"
#include "etr/errors.hpp"
#include "etr/evaluation.hpp"
#include "etr/fca_context.hpp"
#include "etr/lexical_resources.hpp"
#include "etr/ontology.hpp"
#include "etr/synth.hpp"

namespace etr {

namespace {

namespace fs = std::filesystem;

// Flag values as parsed; converted to library configs after validation.
struct RunConfig {
  std::string reference;
  std::string candidate;
  std::string truth;
  std::string taxonomy;
  std::string embeddings;
  std::string out_dir = "etr-out";
  std::string level = "schema";
  double lambda = 0.5;
  std::string entropy = "verbatim";
  bool no_prune = false;
  double prune_threshold = 0.3;
  std::string prune_direction = "low";
  double match_threshold = 0.5;
  std::string normalization = "zscore_then_minmax";
  bool inherit_properties = false;
  bool rollup_instances = false;
  std::string model = "gbdt";
  std::optional<std::uint64_t> seed;
  TrainConfig train;
  std::string macro = "etype";
  std::string empty_class = "exclude";
  std::string dataset = "synthetic";

  void require_file(const std::string& path, const char* what) const {
    if (path.empty()) throw ConfigError(fmt::format("--{} is required", what));
    if (!fs::exists(path) || fs::is_directory(path)) {
      throw ConfigError(fmt::format("{} file '{}' does not exist", what, path));
    }
  }

  void optional_file(const std::string& path, const char* what) const {
    if (!path.empty()) require_file(path, what);
  }

  std::uint64_t required_seed() const {
    if (!seed) throw ConfigError("--seed is required for training commands");
    return *seed;
  }

  EvaluationOptions evaluation() const {
    return {parse_empty_class_policy(empty_class), parse_macro_grouping(macro)};
  }

  RecognitionConfig recognition() const {
    RecognitionConfig rc;
    PipelineConfig& p = rc.pipeline;
    p.level = parse_level(level);
    p.specificity.lambda = lambda;
    p.specificity.entropy_form =
        entropy == "shannon" ? EntropyForm::kShannon : EntropyForm::kVerbatim;
    p.specificity.validate();
    p.query = {inherit_properties, rollup_instances};
    p.prune = !no_prune;
    p.prune_threshold = prune_threshold;
    p.prune_direction = parse_prune_direction(prune_direction);
    p.match_threshold = match_threshold;
    p.normalization = parse_normalization(normalization);
    rc.train = train;
    rc.train.kind = parse_model_kind(model);
    rc.seed = required_seed();
    rc.train.seed = rc.seed;
    rc.train.validate();
    rc.evaluation = evaluation();
    return rc;
  }

  std::map<std::string, std::string> echo() const {
    return {{"level", level},
            {"lambda", format_real(lambda)},
            {"entropy", entropy},
            {"prune", no_prune ? "off" : "on"},
            {"prune_threshold", format_real(prune_threshold)},
            {"prune_direction", prune_direction},
            {"normalization", normalization},
            {"model", model},
            {"seed", seed ? std::to_string(*seed) : ""}};
  }
};

// Loaded lexical resources; pointers stay valid for the struct's lifetime.
struct Resources {
  std::optional<Taxonomy> taxonomy;
  std::optional<EmbeddingTable> embeddings;

  LexicalResources view() const {
    return {taxonomy ? &*taxonomy : nullptr, embeddings ? &*embeddings : nullptr};
  }
};

Resources load_resources(const RunConfig& c) {
  Resources r;
  if (!c.taxonomy.empty()) r.taxonomy = Taxonomy::load(c.taxonomy);
  if (!c.embeddings.empty()) r.embeddings = EmbeddingTable::load(c.embeddings);
  return r;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(fmt::format("cannot create '{}': {}", dir, ec.message()));
}

template <typename Fill>
void write_file(const std::string& dir, const std::string& name, Fill&& fill) {
  const std::string path = (fs::path(dir) / name).string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path));
  fill(out);
}

void write_predictions(const RecognitionResult& r, std::ostream& out) {
  out << "# etr-predictions format_version=1\n"
         "ref_id\tcand_id\tprobability\tdecision\tlabel\n";
  for (std::size_t i = 0; i < r.split.test.size(); ++i) {
    const auto& v = r.split.test[i];
    const auto& p = r.test_predictions[i];
    out << v.pair.ref_id << '\t' << v.pair.cand_id << '\t'
        << format_real(p.probability) << '\t' << (p.decision ? 1 : 0) << '\t'
        << (v.pair.label ? (*v.pair.label ? "1" : "0") : "?") << '\n';
  }
}

struct Inputs {
  Ontology reference;
  Ontology candidate;
  AlignmentTruth truth;
  Resources resources;
};

Inputs load_inputs(const RunConfig& c) {
  c.require_file(c.reference, "reference");
  c.require_file(c.candidate, "candidate");
  c.require_file(c.truth, "truth");
  c.optional_file(c.taxonomy, "taxonomy");
  c.optional_file(c.embeddings, "embeddings");
  Inputs in;
  in.reference = load_ontology(c.reference);
  in.candidate = load_ontology(c.candidate);
  in.truth = load_alignment(c.truth);
  in.resources = load_resources(c);
  return in;
}

int cmd_recognize(const RunConfig& c, std::ostream& out) {
  const RecognitionConfig rc = c.recognition();
  const Inputs in = load_inputs(c);
  RecognitionResult r = run_recognition(in.reference, in.candidate, in.truth,
                                        rc, in.resources.view());
  r.report.config = c.echo();
  r.report.config["candidate_pairs"] = std::to_string(r.run.candidates.size());
  r.report.config["kept_pairs"] = std::to_string(r.run.pruning.kept.size());
  r.report.config["pruned_pairs"] = std::to_string(r.run.pruning.pruned.size());
  r.report.config["pruned_positive_count"] = std::to_string(r.pruned_positive_count);
  r.report.config["split"] =
      fmt::format("{}/{}/{}", r.split.train.size(), r.split.test.size(),
                  r.split.validation.size());

  ensure_dir(c.out_dir);
  write_file(c.out_dir, "features.tsv",
             [&](std::ostream& o) { write_feature_corpus(r.run.corpus, o); });
  write_file(c.out_dir, "model.json", [&](std::ostream& o) { write_model(r.model, o); });
  write_file(c.out_dir, "report.json", [&](std::ostream& o) { write_report(r.report, o); });
  write_file(c.out_dir, "report.txt",
             [&](std::ostream& o) { o << format_report_table(r.report); });
  write_file(c.out_dir, "similarities.tsv",
             [&](std::ostream& o) { write_similarity_dump(r.run.similarities, o); });
  write_file(c.out_dir, "predictions.tsv",
             [&](std::ostream& o) { write_predictions(r, o); });

  fmt::print(out, "{} candidate pairs, {} kept, {} pruned ({} true matches pruned)\n",
             r.run.candidates.size(), r.run.pruning.kept.size(),
             r.run.pruning.pruned.size(), r.pruned_positive_count);
  fmt::print(out, "split train/test/validation = {}/{}/{}\n", r.split.train.size(),
             r.split.test.size(), r.split.validation.size());
  out << format_report_table(r.report);
  return kExitOk;
}

int cmd_synth(const SyntheticSpec& spec, const std::string& dir, std::ostream& out) {
  const SyntheticBenchmark bench = generate_synthetic(spec);
  write_synthetic(bench, dir);
  fmt::print(out, "wrote {} etypes, {} entities, {} properties to {}\n",
             bench.reference.etypes().size(), bench.reference.entities().size(),
             bench.reference.properties().size(), dir);
  return kExitOk;
}

int cmd_ablate(const RunConfig& c, const std::string& mode,
               const std::vector<double>& lambdas, std::ostream& out) {
  const RecognitionConfig rc = c.recognition();
  const Inputs in = load_inputs(c);
  ensure_dir(c.out_dir);
  if (mode == "lambda") {
    for (double l : lambdas) {
      if (!(l > 0.0 && l <= 1.0)) throw ConfigError("lambdas must lie in (0,1]");
    }
    const auto table = ablate_lambda(in.reference, in.candidate, in.truth, rc,
                                     lambdas, in.resources.view(), c.dataset);
    write_file(c.out_dir, "ablation_lambda.tsv",
               [&](std::ostream& o) { write_lambda_ablation(table, o); });
    write_lambda_ablation(table, out);
  } else {
    const PipelineRun run = run_pipeline(in.reference, in.candidate, &in.truth,
                                         rc.pipeline, in.resources.view());
    const auto table = ablate_features(run.corpus, rc.train,
                                       standard_feature_groups(), rc.seed,
                                       c.dataset, /*record_empty=*/true);
    write_file(c.out_dir, "ablation_features.tsv",
               [&](std::ostream& o) { write_feature_ablation(table, o); });
    write_feature_ablation(table, out);
  }
  return kExitOk;
}

int cmd_eval(const RunConfig& c, const std::string& model_path,
             const std::string& corpus_path, std::ostream& out) {
  c.require_file(model_path, "model");
  c.require_file(corpus_path, "corpus");
  const EvaluationOptions opts = c.evaluation();
  const Model model = load_model(model_path);
  const FeatureCorpus corpus = load_feature_corpus(corpus_path);
  const auto preds = model.predict(corpus);
  std::vector<PairDecision> decisions;
  decisions.reserve(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const auto& p = corpus.vectors[i].pair;
    decisions.push_back({p.ref_id, p.cand_id, preds[i].decision});
  }
  EvaluationReport report = evaluate(decisions, truth_from_vectors(corpus.vectors), opts);
  report.config = {{"model", model_path}, {"corpus", corpus_path}};
  ensure_dir(c.out_dir);
  write_file(c.out_dir, "report.json", [&](std::ostream& o) { write_report(report, o); });
  out << format_report_table(report);
  return kExitOk;
}

int cmd_dump_context(const RunConfig& c, const std::string& ontology_path,
                     const std::string& out_path, std::ostream& out) {
  c.require_file(ontology_path, "ontology");
  const Ontology onto = load_ontology(ontology_path);
  const FcaContext ctx = build_context(onto, parse_level(c.level),
                                       {{c.inherit_properties, c.rollup_instances}});
  if (out_path.empty()) {
    dump_context(ctx, out);
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw IoError(fmt::format("cannot write '{}'", out_path));
    dump_context(ctx, f);
  }
  return kExitOk;
}

void add_pipeline_flags(CLI::App* cmd, RunConfig& c) {
  cmd->add_option("--reference", c.reference, "reference ontology (.json or .ttl)");
  cmd->add_option("--candidate", c.candidate, "candidate ontology (.json or .ttl)");
  cmd->add_option("--truth", c.truth, "ground-truth alignment (ref_id<TAB>cand_id)");
  cmd->add_option("--taxonomy", c.taxonomy, "taxonomy file for the Wu-Palmer feature");
  cmd->add_option("--embeddings", c.embeddings, "word embedding file");
  cmd->add_option("--out", c.out_dir, "output directory")->capture_default_str();
  cmd->add_option("--level", c.level, "schema (etype-etype) or instance (entity-etype)")
      ->check(CLI::IsMember({"schema", "instance"}))
      ->capture_default_str();
  cmd->add_option("--lambda", c.lambda, "horizontal specificity constant, in (0,1]")
      ->capture_default_str();
  cmd->add_option("--entropy", c.entropy, "entropy form for informational specificity")
      ->check(CLI::IsMember({"verbatim", "shannon"}))
      ->capture_default_str();
  cmd->add_flag("--no-prune", c.no_prune, "keep trivial samples");
  cmd->add_option("--prune-threshold", c.prune_threshold, "lexical pruning threshold th")
      ->capture_default_str();
  cmd->add_option("--prune-direction", c.prune_direction,
                  "low: drop pairs with PS_s <= th; high: drop PS_s > th")
      ->check(CLI::IsMember({"low", "high"}))
      ->capture_default_str();
  cmd->add_option("--match-threshold", c.match_threshold,
                  "minimum label score for property alignment")
      ->capture_default_str();
  cmd->add_option("--normalization", c.normalization, "similarity normalization")
      ->check(CLI::IsMember({"minmax", "zscore_then_minmax"}))
      ->capture_default_str();
  cmd->add_flag("--inherit-properties,--inherit-props", c.inherit_properties,
                "include ancestors' properties in prop(E)");
  cmd->add_flag("--rollup-instances", c.rollup_instances,
                "count subclass instances in etype populations");
  cmd->add_option("--dataset", c.dataset, "dataset name shown in tables")
      ->capture_default_str();
}

void add_train_flags(CLI::App* cmd, RunConfig& c) {
  cmd->add_option("--model", c.model, "classifier")
      ->check(CLI::IsMember({"gbdt", "mlp"}))
      ->capture_default_str();
  cmd->add_option("--seed", c.seed, "seed for splitting and training (required)");
  cmd->add_option("--trees", c.train.gbdt.n_trees, "boosting rounds")->capture_default_str();
  cmd->add_option("--max-depth", c.train.gbdt.max_depth, "tree depth")->capture_default_str();
  cmd->add_option("--learning-rate", c.train.gbdt.learning_rate, "boosting shrinkage")
      ->capture_default_str();
  cmd->add_option("--min-samples-leaf", c.train.gbdt.min_samples_leaf, "rows per leaf")
      ->capture_default_str();
  cmd->add_option("--hidden", c.train.mlp.hidden, "hidden units")->capture_default_str();
  cmd->add_option("--epochs", c.train.mlp.epochs, "training epochs")->capture_default_str();
  cmd->add_option("--batch", c.train.mlp.batch, "minibatch size")->capture_default_str();
  cmd->add_option("--step", c.train.mlp.step, "Adam step size")->capture_default_str();
  cmd->add_option("--decision-threshold", c.train.decision_threshold,
                  "probability at which a pair counts as matched")
      ->capture_default_str();
}

void add_eval_flags(CLI::App* cmd, RunConfig& c) {
  cmd->add_option("--macro", c.macro, "Ma-F1 classes: per reference etype or binary")
      ->check(CLI::IsMember({"etype", "binary"}))
      ->capture_default_str();
  cmd->add_option("--empty-class", c.empty_class,
                  "Ma-F1 treatment of classes without any positive")
      ->check(CLI::IsMember({"exclude", "one", "zero"}))
      ->capture_default_str();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Entity type recognition across ontologies", "etr"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "read flags from a TOML-style file; flags win");
  int format_version = 1;
  app.add_option("--format_version", format_version,
                 "config file format version (must be 1)")
      ->check(CLI::Range(1, 1));

  RunConfig cfg;
  SyntheticSpec spec;
  std::string synth_out = "synthetic";
  std::string ablate_mode = "features";
  std::vector<double> lambdas = default_lambda_grid();
  std::string model_path;
  std::string corpus_path;
  std::string ontology_path;
  std::string context_out;

  auto* recognize = app.add_subcommand("recognize", "build features, train, evaluate");
  add_pipeline_flags(recognize, cfg);
  add_train_flags(recognize, cfg);
  add_eval_flags(recognize, cfg);

  auto* synth = app.add_subcommand("synth", "generate a synthetic ontology pair");
  synth->add_option("--out", synth_out, "output directory")->capture_default_str();
  synth->add_option("--etypes", spec.n_etypes, "number of etypes")->capture_default_str();
  synth->add_option("--depth", spec.depth, "hierarchy layers")->capture_default_str();
  synth->add_option("--props", spec.properties_per_etype, "specific properties per etype")
      ->capture_default_str();
  synth->add_option("--shared", spec.shared_properties, "shared properties")
      ->capture_default_str();
  synth->add_option("--max-share", spec.max_shareability, "owners per shared property")
      ->capture_default_str();
  synth->add_option("--entities", spec.entities_per_etype, "mean entities per etype")
      ->capture_default_str();
  synth->add_option("--skew", spec.population_skew, "population spread, [0,1)")
      ->capture_default_str();
  synth->add_option("--noise", spec.label_noise, "per-character label noise, [0,1)")
      ->capture_default_str();
  synth->add_option("--subsample", spec.property_subsample,
                    "fraction of each property set dropped in the candidate")
      ->capture_default_str();
  synth->add_option("--seed", spec.seed, "generator seed")->capture_default_str();

  auto* ablate = app.add_subcommand("ablate", "feature-group or lambda ablation");
  ablate->add_option("--mode", ablate_mode, "features or lambda")
      ->check(CLI::IsMember({"features", "lambda"}))
      ->capture_default_str();
  ablate->add_option("--lambdas", lambdas, "lambda values for the sweep")
      ->delimiter(',')
      ->capture_default_str();
  add_pipeline_flags(ablate, cfg);
  add_train_flags(ablate, cfg);
  add_eval_flags(ablate, cfg);

  auto* eval = app.add_subcommand("eval", "score a saved model on a feature corpus");
  eval->add_option("--model", model_path, "model file")->required();
  eval->add_option("--corpus", corpus_path, "labeled feature corpus")->required();
  eval->add_option("--out", cfg.out_dir, "output directory")->capture_default_str();
  add_eval_flags(eval, cfg);

  auto* dump = app.add_subcommand("dump-context", "print an FCA context");
  dump->add_option("--ontology", ontology_path, "ontology file")->required();
  dump->add_option("--level", cfg.level, "schema or instance")
      ->check(CLI::IsMember({"schema", "instance"}))
      ->capture_default_str();
  dump->add_flag("--inherit-properties,--inherit-props", cfg.inherit_properties,
                 "include ancestors' properties");
  dump->add_flag("--rollup-instances", cfg.rollup_instances,
                 "count subclass instances");
  dump->add_option("--out", context_out, "output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  try {
    if (*recognize) return cmd_recognize(cfg, out);
    if (*synth) return cmd_synth(spec, synth_out, out);
    if (*ablate) return cmd_ablate(cfg, ablate_mode, lambdas, out);
    if (*eval) return cmd_eval(cfg, model_path, corpus_path, out);
    if (*dump) return cmd_dump_context(cfg, ontology_path, context_out, out);
  } catch (const ConfigError& e) {
    fmt::print(err, "etr: configuration error: {}\n", e.what());
    return kExitConfig;
  } catch (const Error& e) {
    fmt::print(err, "etr: data error: {}\n", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    fmt::print(err, "etr: internal error: {}\n", e.what());
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace etr
