#include "etr/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include <fmt/format.h>

#include "etr/errors.hpp"
#include "etr/string_metrics.hpp"

namespace etr {

PropertyAlignment PropertyAlignment::reversed() const {
  PropertyAlignment out;
  out.pairs.reserve(pairs.size());
  for (const auto& p : pairs) out.pairs.push_back({p.b, p.a, p.score});
  return out;
}

double property_label_score(std::string_view label_a,
                            std::string_view label_b) {
  const std::string a = normalize_label(label_a);
  const std::string b = normalize_label(label_b);
  return 0.5 * (ngram_sim(a, b) + levenshtein_sim(a, b));
}

PropertyAlignment match_properties(const FcaContext& fa, const FcaContext& fb,
                                   double threshold) {
  auto used = [](const FcaContext& ctx) {
    std::vector<std::size_t> out;
    for (std::size_t p = 0; p < ctx.property_count(); ++p) {
      if (ctx.incidence().column_count(p) > 0) out.push_back(p);
    }
    return out;
  };
  const auto props_a = used(fa);
  const auto props_b = used(fb);
  std::vector<std::string> norm_b;
  norm_b.reserve(props_b.size());
  for (std::size_t q : props_b) norm_b.push_back(normalize_label(fb.property_label(q)));

  struct Candidate {
    double score;
    std::size_t a;
    std::size_t b;
  };
  std::vector<Candidate> candidates;
  for (std::size_t p : props_a) {
    const std::string na = normalize_label(fa.property_label(p));
    for (std::size_t k = 0; k < props_b.size(); ++k) {
      const double score =
          0.5 * (ngram_sim(na, norm_b[k]) + levenshtein_sim(na, norm_b[k]));
      if (score >= threshold) candidates.push_back({score, p, props_b[k]});
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [&](const Candidate& x, const Candidate& y) {
              if (x.score != y.score) return x.score > y.score;
              return std::tie(fa.property_ids()[x.a], fb.property_ids()[x.b]) <
                     std::tie(fa.property_ids()[y.a], fb.property_ids()[y.b]);
            });
  std::vector<bool> taken_a(fa.property_count(), false);
  std::vector<bool> taken_b(fb.property_count(), false);
  PropertyAlignment out;
  for (const auto& c : candidates) {
    if (taken_a[c.a] || taken_b[c.b]) continue;
    taken_a[c.a] = true;
    taken_b[c.b] = true;
    out.pairs.push_back(
        {fa.property_ids()[c.a], fb.property_ids()[c.b], c.score});
  }
  std::sort(out.pairs.begin(), out.pairs.end(),
            [](const PropertyPair& x, const PropertyPair& y) {
              return std::tie(x.a, x.b) < std::tie(y.a, y.b);
            });
  return out;
}

SimilarityCalculator::SimilarityCalculator(const FcaContext& fa,
                                           const FcaContext& fb,
                                           const PropertyAlignment& alignment,
                                           const SpecificityConfig& cfg)
    : fa_(&fa), fb_(&fb), table_a_(fa, cfg), table_b_(fb, cfg) {
  aligned_.reserve(alignment.pairs.size());
  for (const auto& p : alignment.pairs) {
    aligned_.emplace_back(fa.property_index(p.a), fb.property_index(p.b));
  }
}

double SimilarityCalculator::similarity(std::size_t object_a,
                                        std::size_t object_b,
                                        SpecificityKind kind) const {
  const std::size_t size_a = fa_->property_count_of(object_a);
  const std::size_t size_b = fb_->property_count_of(object_b);
  if (size_a == 0 || size_b == 0) {
    throw EmptyPropertySet(fmt::format(
        "'{}' or '{}' has no properties", fa_->object_ids()[object_a],
        fb_->object_ids()[object_b]));
  }
  const double na = static_cast<double>(size_a);
  const double nb = static_cast<double>(size_b);
  double sum = 0.0;
  for (const auto& [pa, pb] : aligned_) {
    if (fa_->has(object_a, pa) && fb_->has(object_b, pb)) {
      sum += table_a_.value(kind, object_a, pa) / na +
             table_b_.value(kind, object_b, pb) / nb;
    }
  }
  return 0.5 * sum;
}

double SimilarityCalculator::similarity(std::string_view object_a,
                                        std::string_view object_b,
                                        SpecificityKind kind) const {
  return similarity(fa_->object_index(object_a), fb_->object_index(object_b),
                    kind);
}

bool SimilarityCalculator::shares_aligned_property(std::size_t object_a,
                                                   std::size_t object_b) const {
  for (const auto& [pa, pb] : aligned_) {
    if (fa_->has(object_a, pa) && fb_->has(object_b, pb)) return true;
  }
  return false;
}

double compute_similarity(const FcaContext& fa, const FcaContext& fb,
                          std::string_view object_a, std::string_view object_b,
                          const PropertyAlignment& alignment,
                          SpecificityKind kind, const SpecificityConfig& cfg) {
  return SimilarityCalculator(fa, fb, alignment, cfg)
      .similarity(object_a, object_b, kind);
}

std::vector<double> compute_similarity_list(
    const SimilarityCalculator& calc, const std::vector<ObjectPair>& pairs,
    SpecificityKind kind) {
  std::vector<double> out;
  out.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    try {
      out.push_back(calc.similarity(pairs[i].first, pairs[i].second, kind));
    } catch (const PairError&) {
      throw;
    } catch (const Error& e) {
      throw PairError(i, e.what());
    }
  }
  return out;
}

std::vector<double> compute_similarity_list(
    const FcaContext& fa, const FcaContext& fb,
    const std::vector<ObjectPair>& pairs, const PropertyAlignment& alignment,
    SpecificityKind kind, const SpecificityConfig& cfg) {
  if (pairs.empty()) return {};
  const SimilarityCalculator calc(fa, fb, alignment, cfg);
  return compute_similarity_list(calc, pairs, kind);
}

std::string_view to_string(NormalizationMethod method) {
  return method == NormalizationMethod::kMinMax ? "minmax"
                                                : "zscore_then_minmax";
}

NormalizationMethod parse_normalization(std::string_view text) {
  if (text == "minmax") return NormalizationMethod::kMinMax;
  if (text == "zscore_then_minmax" || text == "zscore") {
    return NormalizationMethod::kZScoreThenMinMax;
  }
  throw ConfigError(fmt::format("unknown normalization '{}'", text));
}

namespace {

std::vector<double> min_max(const std::vector<double>& values) {
  if (values.empty()) return {};
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  std::vector<double> out(values.size(), 0.5);
  if (!(hi > lo)) return out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = std::clamp((values[i] - lo) / (hi - lo), 0.0, 1.0);
  }
  return out;
}

}  // namespace

std::vector<double> normalize(const std::vector<double>& values,
                              NormalizationMethod method) {
  if (method == NormalizationMethod::kMinMax || values.empty()) {
    return min_max(values);
  }
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / n);
  if (!(sd > 0.0)) return std::vector<double>(values.size(), 0.5);
  std::vector<double> z(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) z[i] = (values[i] - mean) / sd;
  return min_max(z);
}

std::vector<SimilarityRecord> compute_similarity_records(
    const SimilarityCalculator& calc, const std::vector<ObjectPair>& pairs,
    NormalizationMethod method) {
  const auto h = compute_similarity_list(calc, pairs, SpecificityKind::kHorizontal);
  const auto v = compute_similarity_list(calc, pairs, SpecificityKind::kVertical);
  const auto i = compute_similarity_list(calc, pairs,
                                         SpecificityKind::kInformational);
  const auto hn = normalize(h, method);
  const auto vn = normalize(v, method);
  const auto in = normalize(i, method);
  std::vector<SimilarityRecord> out(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    out[k] = {pairs[k].first, pairs[k].second, h[k], v[k], i[k],
              hn[k], vn[k], in[k]};
  }
  return out;
}

}  // namespace etr
