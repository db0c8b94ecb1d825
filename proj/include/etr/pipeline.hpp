#pragma once
// Candidate generation, trivial-sample pruning, feature extraction and
// dataset splitting.

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "etr/fca_context.hpp"
#include "etr/lexical_resources.hpp"
#include "etr/ontology.hpp"
#include "etr/similarity.hpp"
#include "etr/specificity.hpp"

namespace etr {

struct CandidatePair {
  std::string ref_id;   // etype in the reference ontology
  std::string cand_id;  // etype or entity in the candidate ontology
  Level level = Level::kSchema;
  std::optional<bool> label;  // ground truth, absent at inference

  bool operator==(const CandidatePair&) const = default;
};

// Ground-truth matches as (ref_id, cand_id). Pairs not listed are negative.
using AlignmentTruth = std::set<std::pair<std::string, std::string>>;

struct LexicalResources {
  const Taxonomy* taxonomy = nullptr;
  const EmbeddingTable* embeddings = nullptr;
};

namespace feature {
inline constexpr const char* kSimH = "sim_h";
inline constexpr const char* kSimV = "sim_v";
inline constexpr const char* kSimI = "sim_i";
inline constexpr const char* kNgram = "ngram";
inline constexpr const char* kLcs = "lcs";
inline constexpr const char* kLevenshtein = "levenshtein";
inline constexpr const char* kTaxonomy = "taxonomy";
inline constexpr const char* kEmbedding = "embedding";
}  // namespace feature

struct FeatureManifest {
  std::vector<std::string> names;        // column order
  std::vector<std::string> unavailable;  // emitted as 0, resource missing

  static FeatureManifest for_level(Level level,
                                   const LexicalResources& resources = {});
  std::size_t index_of(std::string_view name) const;  // throws UnknownId
  bool operator==(const FeatureManifest&) const = default;
};

struct FeatureVector {
  CandidatePair pair;
  std::vector<double> values;  // manifest order

  bool operator==(const FeatureVector&) const = default;
};

struct FeatureCorpus {
  Level level = Level::kSchema;
  FeatureManifest manifest;
  std::vector<FeatureVector> vectors;

  double value(std::size_t row, std::string_view name) const;
  // Copy without the named columns.
  FeatureCorpus without(const std::vector<std::string>& names) const;
};

struct DatasetSplit {
  std::vector<FeatureVector> train;
  std::vector<FeatureVector> test;
  std::vector<FeatureVector> validation;
  std::uint64_t seed = 0;
};

enum class PruneDirection {
  kDropLow,   // prune when PS_s <= th
  kDropHigh,  // prune when PS_s > th
};

std::string_view to_string(PruneDirection direction);
PruneDirection parse_prune_direction(std::string_view text);

struct PipelineConfig {
  Level level = Level::kSchema;
  SpecificityConfig specificity;
  QueryOptions query;
  bool prune = true;
  double prune_threshold = 0.3;
  PruneDirection prune_direction = PruneDirection::kDropLow;
  double match_threshold = 0.5;
  NormalizationMethod normalization = NormalizationMethod::kZScoreThenMinMax;
};

// Reference etypes x candidate objects (etypes or entities), both in id order.
// Labels are attached when `truth` is given. Throws EmptyContext when either
// side is empty.
std::vector<CandidatePair> generate_candidates(
    const Ontology& ref, const Ontology& cand, Level level,
    const AlignmentTruth* truth = nullptr);

// PS_s = ngram(E_a, E_b) + embedding(E_a, E_b) on the etype labels. The
// embedding term is 0 without an embedding table.
double preselection_score(std::string_view label_a, std::string_view label_b,
                          const LexicalResources& resources);

struct PruneResult {
  std::vector<CandidatePair> kept;
  std::vector<CandidatePair> pruned;
};

// Schema level: PS_s rule with the configured threshold and direction.
// Instance level: pruned when no aligned property links the entity to the
// reference etype. At both levels a pair whose reference or candidate object
// has no property is pruned, as it has no defined property similarity.
PruneResult prune_trivial(const std::vector<CandidatePair>& pairs,
                          const SimilarityCalculator& calc,
                          const PipelineConfig& cfg,
                          const LexicalResources& resources);

// One feature vector per kept pair. Property similarities are normalized
// over `kept`. Schema level adds the five label features.
FeatureCorpus extract_features(const std::vector<CandidatePair>& kept,
                               const SimilarityCalculator& calc,
                               const PipelineConfig& cfg,
                               const LexicalResources& resources,
                               std::vector<SimilarityRecord>* records = nullptr);

// Seeded 50/30/20 split. Vectors sharing a candidate id always land in the
// same split. Throws TooFewSamples below 10 vectors.
DatasetSplit split_dataset(const std::vector<FeatureVector>& vectors,
                           std::uint64_t seed);

// Everything produced by one pass over an ontology pair.
struct PipelineRun {
  std::unique_ptr<FcaContext> ref_context;
  std::unique_ptr<FcaContext> cand_context;
  PropertyAlignment alignment;
  std::unique_ptr<SimilarityCalculator> calculator;
  std::vector<CandidatePair> candidates;
  PruneResult pruning;
  std::vector<SimilarityRecord> similarities;  // aligned with corpus rows
  FeatureCorpus corpus;
};

PipelineRun run_pipeline(const Ontology& ref, const Ontology& cand,
                         const AlignmentTruth* truth,
                         const PipelineConfig& cfg,
                         const LexicalResources& resources = {});

}  // namespace etr
