#include "etr/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "etr/errors.hpp"
#include "etr/random.hpp"
#include "etr/string_metrics.hpp"

namespace etr {

FeatureManifest FeatureManifest::for_level(Level level,
                                           const LexicalResources& resources) {
  FeatureManifest m;
  m.names = {feature::kSimH, feature::kSimV, feature::kSimI};
  if (level == Level::kSchema) {
    m.names.insert(m.names.end(),
                   {feature::kNgram, feature::kLcs, feature::kLevenshtein,
                    feature::kTaxonomy, feature::kEmbedding});
    if (resources.taxonomy == nullptr) m.unavailable.push_back(feature::kTaxonomy);
    if (resources.embeddings == nullptr) {
      m.unavailable.push_back(feature::kEmbedding);
    }
  }
  return m;
}

std::size_t FeatureManifest::index_of(std::string_view name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) {
    throw UnknownId(fmt::format("feature '{}' not in manifest", name));
  }
  return static_cast<std::size_t>(it - names.begin());
}

double FeatureCorpus::value(std::size_t row, std::string_view name) const {
  return vectors.at(row).values.at(manifest.index_of(name));
}

FeatureCorpus FeatureCorpus::without(
    const std::vector<std::string>& names) const {
  std::vector<std::size_t> keep;
  FeatureCorpus out;
  out.level = level;
  for (std::size_t i = 0; i < manifest.names.size(); ++i) {
    const auto& n = manifest.names[i];
    if (std::find(names.begin(), names.end(), n) != names.end()) continue;
    keep.push_back(i);
    out.manifest.names.push_back(n);
    if (std::find(manifest.unavailable.begin(), manifest.unavailable.end(),
                  n) != manifest.unavailable.end()) {
      out.manifest.unavailable.push_back(n);
    }
  }
  out.vectors.reserve(vectors.size());
  for (const auto& v : vectors) {
    FeatureVector fv{v.pair, {}};
    fv.values.reserve(keep.size());
    for (std::size_t i : keep) fv.values.push_back(v.values[i]);
    out.vectors.push_back(std::move(fv));
  }
  return out;
}

std::string_view to_string(PruneDirection direction) {
  return direction == PruneDirection::kDropLow ? "low" : "high";
}

PruneDirection parse_prune_direction(std::string_view text) {
  if (text == "low") return PruneDirection::kDropLow;
  if (text == "high") return PruneDirection::kDropHigh;
  throw ConfigError(fmt::format("unknown prune direction '{}'", text));
}

std::vector<CandidatePair> generate_candidates(const Ontology& ref,
                                               const Ontology& cand,
                                               Level level,
                                               const AlignmentTruth* truth) {
  std::vector<std::string> cand_ids;
  if (level == Level::kSchema) {
    for (const auto& e : cand.etypes()) cand_ids.push_back(e.id);
  } else {
    for (const auto& e : cand.entities()) cand_ids.push_back(e.id);
  }
  if (ref.etypes().empty() || cand_ids.empty()) {
    throw EmptyContext(fmt::format(
        "no candidate pairs: {} reference etypes x {} candidate {}",
        ref.etypes().size(), cand_ids.size(),
        level == Level::kSchema ? "etypes" : "entities"));
  }
  std::vector<CandidatePair> out;
  out.reserve(ref.etypes().size() * cand_ids.size());
  for (const auto& r : ref.etypes()) {
    for (const auto& c : cand_ids) {
      CandidatePair p{r.id, c, level, std::nullopt};
      if (truth != nullptr) p.label = truth->contains({r.id, c});
      out.push_back(std::move(p));
    }
  }
  return out;
}

double preselection_score(std::string_view label_a, std::string_view label_b,
                          const LexicalResources& resources) {
  const double ngram = ngram_sim(normalize_label(label_a),
                                 normalize_label(label_b));
  const double embedding =
      resources.embeddings != nullptr
          ? embedding_sim(*resources.embeddings, label_a, label_b)
          : 0.0;
  return ngram + embedding;
}

PruneResult prune_trivial(const std::vector<CandidatePair>& pairs,
                          const SimilarityCalculator& calc,
                          const PipelineConfig& cfg,
                          const LexicalResources& resources) {
  const FcaContext& fa = calc.context_a();
  const FcaContext& fb = calc.context_b();
  PruneResult result;
  for (const auto& pair : pairs) {
    const std::size_t a = fa.object_index(pair.ref_id);
    const std::size_t b = fb.object_index(pair.cand_id);
    bool drop = fa.property_count_of(a) == 0 || fb.property_count_of(b) == 0;
    if (!drop && cfg.prune) {
      if (pair.level == Level::kSchema) {
        const double ps =
            preselection_score(fa.label_of(a), fb.label_of(b), resources);
        drop = cfg.prune_direction == PruneDirection::kDropLow
                   ? ps <= cfg.prune_threshold
                   : ps > cfg.prune_threshold;
      } else {
        drop = !calc.shares_aligned_property(a, b);
      }
    }
    (drop ? result.pruned : result.kept).push_back(pair);
  }
  return result;
}

FeatureCorpus extract_features(const std::vector<CandidatePair>& kept,
                               const SimilarityCalculator& calc,
                               const PipelineConfig& cfg,
                               const LexicalResources& resources,
                               std::vector<SimilarityRecord>* records) {
  FeatureCorpus corpus;
  corpus.level = cfg.level;
  corpus.manifest = FeatureManifest::for_level(cfg.level, resources);
  std::vector<ObjectPair> pairs;
  pairs.reserve(kept.size());
  for (const auto& p : kept) pairs.emplace_back(p.ref_id, p.cand_id);
  auto sims = compute_similarity_records(calc, pairs, cfg.normalization);

  const FcaContext& fa = calc.context_a();
  const FcaContext& fb = calc.context_b();
  corpus.vectors.reserve(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    FeatureVector fv{kept[i], {sims[i].sim_h_n, sims[i].sim_v_n, sims[i].sim_i_n}};
    if (cfg.level == Level::kSchema) {
      try {
        const std::string& la = fa.label_of(fa.object_index(kept[i].ref_id));
        const std::string& lb = fb.label_of(fb.object_index(kept[i].cand_id));
        const std::string na = normalize_label(la);
        const std::string nb = normalize_label(lb);
        fv.values.push_back(ngram_sim(na, nb));
        fv.values.push_back(lcs_sim(na, nb));
        fv.values.push_back(levenshtein_sim(na, nb));
        fv.values.push_back(resources.taxonomy != nullptr
                                ? taxonomy_sim(*resources.taxonomy, la, lb)
                                : 0.0);
        fv.values.push_back(resources.embeddings != nullptr
                                ? embedding_sim(*resources.embeddings, la, lb)
                                : 0.0);
      } catch (const Error& e) {
        throw PairError(i, e.what());
      }
    }
    corpus.vectors.push_back(std::move(fv));
  }
  if (records != nullptr) *records = std::move(sims);
  return corpus;
}

DatasetSplit split_dataset(const std::vector<FeatureVector>& vectors,
                           std::uint64_t seed) {
  if (vectors.size() < 10) {
    throw TooFewSamples(fmt::format(
        "need at least 10 feature vectors to split, got {}", vectors.size()));
  }
  // Groups keyed by candidate id, in first-appearance order before shuffling.
  std::map<std::string, std::size_t> group_of;
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    auto [it, inserted] =
        group_of.emplace(vectors[i].pair.cand_id, groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(i);
  }
  Rng rng(seed);
  rng.shuffle(std::span(groups));

  const double n = static_cast<double>(vectors.size());
  const std::size_t train_target = static_cast<std::size_t>(std::floor(n * 0.5 + 0.5));
  const std::size_t test_target = static_cast<std::size_t>(std::floor(n * 0.3 + 0.5));
  const std::size_t targets[3] = {train_target, test_target,
                                  vectors.size() - train_target - test_target};
  std::size_t sizes[3] = {0, 0, 0};
  DatasetSplit split;
  split.seed = seed;
  std::vector<FeatureVector>* parts[3] = {&split.train, &split.test,
                                          &split.validation};
  for (const auto& g : groups) {
    // Largest remaining deficit wins; ties go to the earlier split.
    std::size_t best = 0;
    double best_deficit = -1e300;
    for (std::size_t s = 0; s < 3; ++s) {
      const double deficit =
          static_cast<double>(targets[s]) - static_cast<double>(sizes[s]);
      if (deficit > best_deficit) {
        best_deficit = deficit;
        best = s;
      }
    }
    for (std::size_t i : g) parts[best]->push_back(vectors[i]);
    sizes[best] += g.size();
  }
  return split;
}

PipelineRun run_pipeline(const Ontology& ref, const Ontology& cand,
                         const AlignmentTruth* truth,
                         const PipelineConfig& cfg,
                         const LexicalResources& resources) {
  cfg.specificity.validate();
  PipelineRun run;
  const ContextOptions ctx_opts{cfg.query};
  run.ref_context = std::make_unique<FcaContext>(
      build_context(ref, Level::kSchema, ctx_opts));
  run.cand_context =
      std::make_unique<FcaContext>(build_context(cand, cfg.level, ctx_opts));
  run.alignment = match_properties(*run.ref_context, *run.cand_context,
                                   cfg.match_threshold);
  run.calculator = std::make_unique<SimilarityCalculator>(
      *run.ref_context, *run.cand_context, run.alignment, cfg.specificity);
  run.candidates = generate_candidates(ref, cand, cfg.level, truth);
  run.pruning = prune_trivial(run.candidates, *run.calculator, cfg, resources);
  run.corpus = extract_features(run.pruning.kept, *run.calculator, cfg,
                                resources, &run.similarities);
  return run;
}

}  // namespace etr
