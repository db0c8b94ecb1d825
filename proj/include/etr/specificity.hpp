#pragma once
// Property specificity measures over an FcaContext.
//
//   HS(E,p) = w_E(p) * exp(lambda * (1 - |K_v|))
//   VS(E,p) = w_E(p) * min_{E' in K_v} layer(E') / max_depth
//   IS(E,p) = w_E(p) * rescale(H(K) - sum_v |K_v|/|K| * H(K_v))
//   H(K_v)  = -(sum_i F(E_i) * ln(F(E_i) / |K_v|)) / |K_v|
//
// w_E(p) is +1 when p is in prop(E) and -1 otherwise. K_v is the extent of p;
// the sum in IS runs over the two blocks (K+, K-) of the partition induced by
// possessing p. Raw gains are min-max rescaled into [0,1] over all
// properties of the context before w is applied. A property with an empty
// extent yields 0 and is flagged as degenerate.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "etr/fca_context.hpp"

namespace etr {

enum class SpecificityKind { kHorizontal, kVertical, kInformational };

std::string_view to_string(SpecificityKind kind);

enum class EntropyForm {
  kVerbatim,  // divides raw-count terms by |K_v|
  kShannon,   // standard entropy of the normalized distribution
};

struct SpecificityConfig {
  double lambda = 0.5;
  EntropyForm entropy_form = EntropyForm::kVerbatim;

  void validate() const;
};

struct SpecificityValue {
  SpecificityKind kind = SpecificityKind::kHorizontal;
  double value = 0.0;
  bool degenerate = false;  // empty extent
};

// Association weight w_E(p).
double association_weight(const FcaContext& ctx, std::size_t object,
                          std::size_t property);

SpecificityValue horizontal_specificity(const FcaContext& ctx,
                                        std::string_view object_id,
                                        std::string_view property_id,
                                        const SpecificityConfig& cfg = {});
SpecificityValue vertical_specificity(const FcaContext& ctx,
                                      std::string_view object_id,
                                      std::string_view property_id,
                                      const SpecificityConfig& cfg = {});
SpecificityValue informational_specificity(const FcaContext& ctx,
                                           std::string_view object_id,
                                           std::string_view property_id,
                                           const SpecificityConfig& cfg = {});

// Entropy of a set of `set_size` objects whose populations are `counts`.
// Zero counts contribute nothing; an empty set has entropy 0.
double entropy_of_counts(std::span<const double> counts, double set_size,
                         EntropyForm form = EntropyForm::kVerbatim);

// H(K_v) with F looked up per object id (missing ids count as 0).
double informational_entropy(const ExtentSet& extent,
                             const std::map<std::string, double>& counts,
                             EntropyForm form = EntropyForm::kVerbatim);

// Unscaled IS gain of a property (independent of the object).
double information_gain(const FcaContext& ctx, std::size_t property,
                        EntropyForm form = EntropyForm::kVerbatim);

// Per-property statistics of a context, computed once and shared by every
// (object, property) lookup.
class SpecificityTable {
 public:
  SpecificityTable(const FcaContext& ctx, const SpecificityConfig& cfg);

  const FcaContext& context() const { return *ctx_; }
  const SpecificityConfig& config() const { return cfg_; }

  std::size_t extent_size(std::size_t property) const {
    return stats_[property].extent_size;
  }
  double raw_gain(std::size_t property) const {
    return stats_[property].raw_gain;
  }
  double scaled_gain(std::size_t property) const {
    return stats_[property].scaled_gain;
  }

  // Weighted specificity of (object, property).
  double value(SpecificityKind kind, std::size_t object,
               std::size_t property) const;
  // The same with w = +1.
  double magnitude(SpecificityKind kind, std::size_t property) const;

 private:
  struct Stats {
    std::size_t extent_size = 0;
    int min_layer = 0;
    double raw_gain = 0.0;
    double scaled_gain = 0.0;
    double horizontal = 0.0;
    double vertical = 0.0;
  };

  const FcaContext* ctx_;
  SpecificityConfig cfg_;
  std::vector<Stats> stats_;
};

}  // namespace etr
