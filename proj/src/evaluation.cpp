#include "etr/evaluation.hpp"

#include <algorithm>
#include <ostream>

#include <fmt/format.h>
#include <json.hpp>

#include "etr/errors.hpp"
#include "etr/random.hpp"

namespace etr {

double Confusion::precision() const {
  return tp + fp == 0 ? 0.0
                      : static_cast<double>(tp) / static_cast<double>(tp + fp);
}

double Confusion::recall() const {
  return tp + fn == 0 ? 0.0
                      : static_cast<double>(tp) / static_cast<double>(tp + fn);
}

double Confusion::f1() const {
  if (!f1_defined()) return 0.0;
  return 2.0 * static_cast<double>(tp) /
         static_cast<double>(2 * tp + fp + fn);
}

Confusion& Confusion::operator+=(const Confusion& o) {
  tp += o.tp;
  fp += o.fp;
  fn += o.fn;
  tn += o.tn;
  return *this;
}

std::string_view to_string(EmptyClassPolicy policy) {
  switch (policy) {
    case EmptyClassPolicy::kExclude: return "exclude";
    case EmptyClassPolicy::kAsOne: return "one";
    case EmptyClassPolicy::kAsZero: return "zero";
  }
  return "exclude";
}

EmptyClassPolicy parse_empty_class_policy(std::string_view text) {
  if (text == "exclude") return EmptyClassPolicy::kExclude;
  if (text == "one") return EmptyClassPolicy::kAsOne;
  if (text == "zero") return EmptyClassPolicy::kAsZero;
  throw ConfigError(fmt::format("unknown empty-class policy '{}' (exclude|one|zero)", text));
}

std::string_view to_string(MacroGrouping grouping) {
  return grouping == MacroGrouping::kReferenceEtype ? "etype" : "binary";
}

MacroGrouping parse_macro_grouping(std::string_view text) {
  if (text == "etype") return MacroGrouping::kReferenceEtype;
  if (text == "binary") return MacroGrouping::kBinary;
  throw ConfigError(fmt::format("unknown macro grouping '{}' (etype|binary)", text));
}

GroundTruth truth_from_pairs(const std::vector<CandidatePair>& pairs) {
  GroundTruth truth;
  for (const auto& p : pairs) {
    if (!p.label) {
      throw MissingTruth(fmt::format("pair ({}, {}) has no label", p.ref_id, p.cand_id));
    }
    truth[{p.ref_id, p.cand_id}] = *p.label;
  }
  return truth;
}

GroundTruth truth_from_vectors(const std::vector<FeatureVector>& vectors) {
  std::vector<CandidatePair> pairs;
  pairs.reserve(vectors.size());
  for (const auto& v : vectors) pairs.push_back(v.pair);
  return truth_from_pairs(pairs);
}

namespace {

ClassScore score_class(std::string key, const Confusion& c,
                       EmptyClassPolicy policy) {
  ClassScore s{std::move(key), c, c.f1(), true};
  if (!c.f1_defined()) {
    switch (policy) {
      case EmptyClassPolicy::kExclude: s.included = false; break;
      case EmptyClassPolicy::kAsOne: s.f1 = 1.0; break;
      case EmptyClassPolicy::kAsZero: s.f1 = 0.0; break;
    }
  }
  return s;
}

}  // namespace

EvaluationReport evaluate(const std::vector<PairDecision>& predictions,
                          const GroundTruth& truth,
                          const EvaluationOptions& options) {
  EvaluationReport report;
  report.options = options;
  std::map<std::string, Confusion> by_etype;
  std::vector<std::string> lines;
  lines.reserve(predictions.size());
  for (const auto& p : predictions) {
    auto it = truth.find({p.ref_id, p.cand_id});
    if (it == truth.end()) {
      throw MissingTruth(fmt::format("no ground truth for ({}, {})", p.ref_id, p.cand_id));
    }
    const bool actual = it->second;
    Confusion& c = by_etype[p.ref_id];
    if (p.decision && actual) {
      ++c.tp;
    } else if (p.decision) {
      ++c.fp;
    } else if (actual) {
      ++c.fn;
    } else {
      ++c.tn;
    }
    lines.push_back(fmt::format("{}\t{}\t{:d}\t{:d}", p.ref_id, p.cand_id,
                                actual, p.decision));
  }
  for (const auto& [key, c] : by_etype) report.pooled += c;
  report.precision = report.pooled.precision();
  report.recall = report.pooled.recall();
  report.mi_f1 = report.pooled.f1_defined()
                     ? report.pooled.f1()
                     : (options.empty_class == EmptyClassPolicy::kAsOne ? 1.0 : 0.0);

  if (options.macro == MacroGrouping::kReferenceEtype) {
    for (const auto& [key, c] : by_etype) {
      report.per_class.push_back(score_class(key, c, options.empty_class));
    }
  } else {
    const Confusion& pos = report.pooled;
    const Confusion neg{pos.tn, pos.fn, pos.fp, pos.tp};
    report.per_class.push_back(score_class("match", pos, options.empty_class));
    report.per_class.push_back(score_class("non-match", neg, options.empty_class));
  }
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& s : report.per_class) {
    if (!s.included) continue;
    sum += s.f1;
    ++n;
  }
  report.ma_f1 = n == 0 ? 0.0 : sum / static_cast<double>(n);

  std::sort(lines.begin(), lines.end());
  std::uint64_t h = fnv1a("etr-eval");
  for (const auto& l : lines) h = fnv1a(l + "\n", h);
  report.fingerprint = h;
  return report;
}

void write_report(const EvaluationReport& report, std::ostream& out) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["format_version"] = 1;
  doc["mi_f1"] = report.mi_f1;
  doc["ma_f1"] = report.ma_f1;
  doc["precision"] = report.precision;
  doc["recall"] = report.recall;
  doc["pooled"] = {{"tp", report.pooled.tp},
                   {"fp", report.pooled.fp},
                   {"fn", report.pooled.fn},
                   {"tn", report.pooled.tn}};
  doc["macro_grouping"] = std::string(to_string(report.options.macro));
  doc["empty_class"] = std::string(to_string(report.options.empty_class));
  ordered_json classes = ordered_json::array();
  for (const auto& s : report.per_class) {
    classes.push_back({{"class", s.key},
                       {"tp", s.counts.tp},
                       {"fp", s.counts.fp},
                       {"fn", s.counts.fn},
                       {"tn", s.counts.tn},
                       {"f1", s.f1},
                       {"included", s.included}});
  }
  doc["per_class"] = std::move(classes);
  ordered_json cfg = ordered_json::object();
  for (const auto& [k, v] : report.config) cfg[k] = v;
  doc["config"] = std::move(cfg);
  doc["fingerprint"] = fmt::format("{:016x}", report.fingerprint);
  out << doc.dump(1) << '\n';
}

std::string format_report_table(const EvaluationReport& report) {
  std::size_t width = 5;
  for (const auto& s : report.per_class) width = std::max(width, s.key.size());
  std::string out = fmt::format("{:<{}}  {:>5} {:>5} {:>5} {:>6}  {:>6}\n",
                                "class", width, "tp", "fp", "fn", "tn", "F1");
  for (const auto& s : report.per_class) {
    out += fmt::format("{:<{}}  {:>5} {:>5} {:>5} {:>6}  {:>6}\n", s.key, width,
                       s.counts.tp, s.counts.fp, s.counts.fn, s.counts.tn,
                       s.included ? fmt::format("{:.4f}", s.f1) : "-");
  }
  out += fmt::format("\nMi-F1 {:.4f}  Ma-F1 {:.4f}  P {:.4f}  R {:.4f}\n",
                     report.mi_f1, report.ma_f1, report.precision, report.recall);
  return out;
}

}  // namespace etr
