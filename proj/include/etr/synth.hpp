#pragma once
// Seeded generator for reference/candidate ontology pairs with known
// alignments, plus a matching taxonomy and embedding table.
//
// Etype labels are compounds of a modifier and the parent's head word
// ("Person" -> "StudentPerson"), so siblings share substrings and survive
// lexical pruning as hard negatives. The candidate is a copy with new ids,
// per-character label noise and subsampled property sets.

#include <cstdint>
#include <string>

#include "etr/ontology.hpp"
#include "etr/pipeline.hpp"

namespace etr {

struct SyntheticSpec {
  int n_etypes = 20;
  int depth = 3;                 // hierarchy layers, all populated
  int properties_per_etype = 3;  // etype-specific properties
  int shared_properties = 6;     // properties asserted by several etypes
  int max_shareability = 4;      // each shared property has 2..max owners
  int entities_per_etype = 6;    // mean population
  double population_skew = 0.5;  // populations spread over mean*(1 +- skew)
  double label_noise = 0.0;      // per-character edit probability, [0,1)
  double property_subsample = 0.0;  // fraction of each property set dropped
  double entity_property_keep = 0.7;  // chance an entity asserts a type prop
  std::uint64_t seed = 1;

  void validate() const;  // throws InvalidSpec
};

struct SyntheticBenchmark {
  Ontology reference;
  Ontology candidate;
  AlignmentTruth schema_truth;    // (reference etype, candidate etype)
  AlignmentTruth instance_truth;  // (reference etype, candidate entity)
  std::string taxonomy_text;
  std::string embeddings_text;
};

SyntheticBenchmark generate_synthetic(const SyntheticSpec& spec);

// Writes reference.json, candidate.json, truth_schema.tsv,
// truth_instance.tsv, taxonomy.txt and embeddings.txt into `dir`.
void write_synthetic(const SyntheticBenchmark& bench, const std::string& dir);

}  // namespace etr
