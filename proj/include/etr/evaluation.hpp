#pragma once
// Precision, recall and F1 over matched / unmatched pair decisions, pooled
// (micro) and averaged per class (macro).

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "etr/pipeline.hpp"

namespace etr {

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  // 0 when the denominator is 0.
  double precision() const;
  double recall() const;
  // F1 of the positive class; false when neither truth nor predictions
  // contain a positive.
  bool f1_defined() const { return tp + fp + fn > 0; }
  double f1() const;
  Confusion& operator+=(const Confusion& o);
  bool operator==(const Confusion&) const = default;
};

// How a class with no positive in truth or predictions enters Ma-F1.
enum class EmptyClassPolicy { kExclude, kAsOne, kAsZero };

// Ma-F1 classes: one per reference etype, or the two binary classes
// (match / non-match).
enum class MacroGrouping { kReferenceEtype, kBinary };

std::string_view to_string(EmptyClassPolicy policy);
EmptyClassPolicy parse_empty_class_policy(std::string_view text);
std::string_view to_string(MacroGrouping grouping);
MacroGrouping parse_macro_grouping(std::string_view text);

struct EvaluationOptions {
  EmptyClassPolicy empty_class = EmptyClassPolicy::kExclude;
  MacroGrouping macro = MacroGrouping::kReferenceEtype;
};

struct PairDecision {
  std::string ref_id;
  std::string cand_id;
  bool decision = false;
};

// Labeled pairs; evaluation requires every predicted pair to appear here.
using GroundTruth = std::map<std::pair<std::string, std::string>, bool>;

// Throws MissingTruth for an unlabeled pair.
GroundTruth truth_from_pairs(const std::vector<CandidatePair>& pairs);
GroundTruth truth_from_vectors(const std::vector<FeatureVector>& vectors);

struct ClassScore {
  std::string key;
  Confusion counts;
  double f1 = 0.0;
  bool included = true;  // false when excluded from Ma-F1
};

struct EvaluationReport {
  double ma_f1 = 0.0;
  double mi_f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  Confusion pooled;
  std::vector<ClassScore> per_class;  // sorted by key
  EvaluationOptions options;
  std::map<std::string, std::string> config;  // echoed run settings
  std::uint64_t fingerprint = 0;  // order-independent hash of the inputs
};

// Throws MissingTruth when a predicted pair is absent from `truth`.
EvaluationReport evaluate(const std::vector<PairDecision>& predictions,
                          const GroundTruth& truth,
                          const EvaluationOptions& options = {});

// Versioned JSON document.
void write_report(const EvaluationReport& report, std::ostream& out);
// Fixed-width table for terminals.
std::string format_report_table(const EvaluationReport& report);

}  // namespace etr
