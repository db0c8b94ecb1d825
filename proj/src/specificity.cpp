#include "etr/specificity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "etr/errors.hpp"

namespace etr {

std::string_view to_string(SpecificityKind kind) {
  switch (kind) {
    case SpecificityKind::kHorizontal: return "H";
    case SpecificityKind::kVertical: return "V";
    case SpecificityKind::kInformational: return "I";
  }
  return "?";
}

void SpecificityConfig::validate() const {
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw ConfigError(fmt::format("lambda must lie in (0, 1], got {}", lambda));
  }
}

double association_weight(const FcaContext& ctx, std::size_t object,
                          std::size_t property) {
  return ctx.has(object, property) ? 1.0 : -1.0;
}

double entropy_of_counts(std::span<const double> counts, double set_size,
                         EntropyForm form) {
  if (form == EntropyForm::kShannon) {
    double total = 0.0;
    for (double c : counts) total += c;
    if (total <= 0.0) return 0.0;
    double h = 0.0;
    for (double c : counts) {
      if (c > 0.0) h -= (c / total) * std::log(c / total);
    }
    return h;
  }
  if (set_size <= 0.0) return 0.0;
  double sum = 0.0;
  for (double c : counts) {
    if (c > 0.0) sum += c * std::log(c / set_size);
  }
  return -sum / set_size;
}

double informational_entropy(const ExtentSet& extent,
                             const std::map<std::string, double>& counts,
                             EntropyForm form) {
  std::vector<double> f;
  f.reserve(extent.size());
  for (const auto& id : extent.object_ids) {
    auto it = counts.find(id);
    f.push_back(it == counts.end() ? 0.0 : it->second);
  }
  return entropy_of_counts(f, static_cast<double>(extent.size()), form);
}

namespace {

// Entropy of the objects selected by `member`, grouping populations by class.
template <typename Pred>
double block_entropy(const FcaContext& ctx, Pred member, EntropyForm form,
                     std::size_t* block_size) {
  std::map<std::size_t, double> by_class;
  std::size_t n = 0;
  for (std::size_t o = 0; o < ctx.object_count(); ++o) {
    if (!member(o)) continue;
    ++n;
    by_class[ctx.population_class(o)] +=
        static_cast<double>(ctx.population(o));
  }
  *block_size = n;
  std::vector<double> counts;
  counts.reserve(by_class.size());
  for (const auto& [cls, c] : by_class) counts.push_back(c);
  return entropy_of_counts(counts, static_cast<double>(n), form);
}

}  // namespace

double information_gain(const FcaContext& ctx, std::size_t property,
                        EntropyForm form) {
  std::size_t n_all = 0;
  std::size_t n_plus = 0;
  std::size_t n_minus = 0;
  const double h_all =
      block_entropy(ctx, [](std::size_t) { return true; }, form, &n_all);
  if (n_all == 0) return 0.0;
  const double h_plus = block_entropy(
      ctx, [&](std::size_t o) { return ctx.has(o, property); }, form, &n_plus);
  const double h_minus = block_entropy(
      ctx, [&](std::size_t o) { return !ctx.has(o, property); }, form,
      &n_minus);
  const double total = static_cast<double>(n_all);
  return h_all - (static_cast<double>(n_plus) / total) * h_plus -
         (static_cast<double>(n_minus) / total) * h_minus;
}

SpecificityTable::SpecificityTable(const FcaContext& ctx,
                                   const SpecificityConfig& cfg)
    : ctx_(&ctx), cfg_(cfg), stats_(ctx.property_count()) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < stats_.size(); ++p) {
    Stats& s = stats_[p];
    const auto ext = ctx.extent_indices(p);
    s.extent_size = ext.size();
    if (!ext.empty()) {
      s.min_layer = ctx.object_layer(ext.front());
      for (std::size_t o : ext) {
        s.min_layer = std::min(s.min_layer, ctx.object_layer(o));
      }
      s.horizontal = std::exp(cfg.lambda *
                              (1.0 - static_cast<double>(ext.size())));
      s.vertical = static_cast<double>(s.min_layer) /
                   static_cast<double>(ctx.layer_normalizer());
    }
    s.raw_gain = information_gain(ctx, p, cfg.entropy_form);
    lo = std::min(lo, s.raw_gain);
    hi = std::max(hi, s.raw_gain);
  }
  for (Stats& s : stats_) {
    // A context whose properties are all equally informative maps to the
    // midpoint, matching the constant-list rule of `normalize`.
    s.scaled_gain = hi > lo ? (s.raw_gain - lo) / (hi - lo) : 0.5;
    if (s.extent_size == 0) s.scaled_gain = 0.0;
  }
}

double SpecificityTable::magnitude(SpecificityKind kind,
                                   std::size_t property) const {
  const Stats& s = stats_[property];
  switch (kind) {
    case SpecificityKind::kHorizontal: return s.horizontal;
    case SpecificityKind::kVertical: return s.vertical;
    case SpecificityKind::kInformational: return s.scaled_gain;
  }
  return 0.0;
}

double SpecificityTable::value(SpecificityKind kind, std::size_t object,
                               std::size_t property) const {
  return association_weight(*ctx_, object, property) *
         magnitude(kind, property);
}

SpecificityValue horizontal_specificity(const FcaContext& ctx,
                                        std::string_view object_id,
                                        std::string_view property_id,
                                        const SpecificityConfig& cfg) {
  const std::size_t o = ctx.object_index(object_id);
  const std::size_t p = ctx.property_index(property_id);
  const std::size_t k = ctx.incidence().column_count(p);
  SpecificityValue v{SpecificityKind::kHorizontal, 0.0, k == 0};
  if (k > 0) {
    v.value = association_weight(ctx, o, p) *
              std::exp(cfg.lambda * (1.0 - static_cast<double>(k)));
  }
  return v;
}

SpecificityValue vertical_specificity(const FcaContext& ctx,
                                      std::string_view object_id,
                                      std::string_view property_id,
                                      const SpecificityConfig&) {
  const std::size_t o = ctx.object_index(object_id);
  const std::size_t p = ctx.property_index(property_id);
  const auto ext = ctx.extent_indices(p);
  SpecificityValue v{SpecificityKind::kVertical, 0.0, ext.empty()};
  if (!ext.empty()) {
    int min_layer = ctx.object_layer(ext.front());
    for (std::size_t i : ext) min_layer = std::min(min_layer, ctx.object_layer(i));
    v.value = association_weight(ctx, o, p) * static_cast<double>(min_layer) /
              static_cast<double>(ctx.layer_normalizer());
  }
  return v;
}

SpecificityValue informational_specificity(const FcaContext& ctx,
                                           std::string_view object_id,
                                           std::string_view property_id,
                                           const SpecificityConfig& cfg) {
  const std::size_t o = ctx.object_index(object_id);
  const std::size_t p = ctx.property_index(property_id);
  const SpecificityTable table(ctx, cfg);
  return {SpecificityKind::kInformational,
          table.value(SpecificityKind::kInformational, o, p),
          table.extent_size(p) == 0};
}

}  // namespace etr
