#pragma once
// Property alignment and the property-based similarities Sim_H, Sim_V, Sim_I.
//
// For candidate pair (E_a, E_b) and alignment PM:
//   Sim(E_a, E_b) = 1/2 * sum over (p_n, p_m) in PM with p_n in prop(E_a) and
//                   p_m in prop(E_b) of
//                   SPC_A(E_a, p_n) / |prop(E_a)| + SPC_B(E_b, p_m) / |prop(E_b)|
// where SPC is HS, VS or IS. Aligned pairs are visited in PM order, so
// swapping the contexts together with a reversed PM gives a bit-identical
// result.

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "etr/fca_context.hpp"
#include "etr/specificity.hpp"

namespace etr {

struct PropertyPair {
  std::string a;  // property id in the reference context
  std::string b;  // property id in the candidate context
  double score = 0.0;

  bool operator==(const PropertyPair&) const = default;
};

struct PropertyAlignment {
  std::vector<PropertyPair> pairs;  // sorted by (a, b)

  PropertyAlignment reversed() const;
  bool operator==(const PropertyAlignment&) const = default;
};

// Label score used by the matcher: mean of trigram Dice and normalized
// Levenshtein similarity on the normalized labels.
double property_label_score(std::string_view label_a, std::string_view label_b);

// Greedy best-first 1:1 matching of the properties that occur in each
// context. Candidates scoring below `threshold` are dropped; ties are broken
// by (id_a, id_b).
PropertyAlignment match_properties(const FcaContext& fa, const FcaContext& fb,
                                   double threshold = 0.5);

using ObjectPair = std::pair<std::string, std::string>;

// Shares two specificity tables and the resolved alignment across many
// candidate pairs.
class SimilarityCalculator {
 public:
  SimilarityCalculator(const FcaContext& fa, const FcaContext& fb,
                       const PropertyAlignment& alignment,
                       const SpecificityConfig& cfg);

  // Throws UnknownId for unresolvable objects and EmptyPropertySet when
  // either object has no property.
  double similarity(std::size_t object_a, std::size_t object_b,
                    SpecificityKind kind) const;
  double similarity(std::string_view object_a, std::string_view object_b,
                    SpecificityKind kind) const;

  const FcaContext& context_a() const { return *fa_; }
  const FcaContext& context_b() const { return *fb_; }
  const SpecificityTable& table_a() const { return table_a_; }
  const SpecificityTable& table_b() const { return table_b_; }
  // Aligned (property_a, property_b) index pairs in alignment order.
  const std::vector<std::pair<std::size_t, std::size_t>>& aligned() const {
    return aligned_;
  }
  // True when some aligned pair links a property of object_a to one of
  // object_b.
  bool shares_aligned_property(std::size_t object_a, std::size_t object_b) const;

 private:
  const FcaContext* fa_;
  const FcaContext* fb_;
  SpecificityTable table_a_;
  SpecificityTable table_b_;
  std::vector<std::pair<std::size_t, std::size_t>> aligned_;
};

double compute_similarity(const FcaContext& fa, const FcaContext& fb,
                          std::string_view object_a, std::string_view object_b,
                          const PropertyAlignment& alignment,
                          SpecificityKind kind,
                          const SpecificityConfig& cfg = {});

// One raw similarity per candidate pair, in input order. Errors are rethrown
// as PairError carrying the offending index.
std::vector<double> compute_similarity_list(
    const FcaContext& fa, const FcaContext& fb,
    const std::vector<ObjectPair>& pairs, const PropertyAlignment& alignment,
    SpecificityKind kind, const SpecificityConfig& cfg = {});
std::vector<double> compute_similarity_list(
    const SimilarityCalculator& calc, const std::vector<ObjectPair>& pairs,
    SpecificityKind kind);

enum class NormalizationMethod { kMinMax, kZScoreThenMinMax };

std::string_view to_string(NormalizationMethod method);
NormalizationMethod parse_normalization(std::string_view text);

// Rescales into [0, 1]. A constant list maps to 0.5 everywhere. The z-score
// step uses the population standard deviation.
std::vector<double> normalize(const std::vector<double>& values,
                              NormalizationMethod method);

struct SimilarityRecord {
  std::string object_a;
  std::string object_b;
  double sim_h = 0.0;
  double sim_v = 0.0;
  double sim_i = 0.0;
  double sim_h_n = 0.0;
  double sim_v_n = 0.0;
  double sim_i_n = 0.0;
};

// All three similarities for every pair, normalized over `pairs`.
std::vector<SimilarityRecord> compute_similarity_records(
    const SimilarityCalculator& calc, const std::vector<ObjectPair>& pairs,
    NormalizationMethod method);

}  // namespace etr
