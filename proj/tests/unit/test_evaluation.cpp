#include <gtest/gtest.h>

#include <algorithm>
#include <json.hpp>
#include <sstream>

#include "etr/errors.hpp"
#include "etr/evaluation.hpp"
#include "etr/random.hpp"

namespace etr {
namespace {

// Two reference etypes. A: one hit, two true negatives (F1 = 1).
// B: one hit, one miss, one false alarm (F1 = 1/2).
struct Fixture {
  std::vector<PairDecision> preds{
      {"A", "x", true},  {"A", "y", false}, {"A", "z", false},
      {"B", "x", true},  {"B", "y", false}, {"B", "z", true}};
  GroundTruth truth{{{"A", "x"}, true},  {{"A", "y"}, false}, {{"A", "z"}, false},
                    {{"B", "x"}, true},  {{"B", "y"}, true},  {{"B", "z"}, false}};

  void add_empty_class() {
    for (const char* c : {"x", "y", "z"}) {
      preds.push_back({"C", c, false});
      truth[{"C", c}] = false;
    }
  }
};

TEST(Confusion, TwoThirds) {
  const Confusion c{2, 1, 1, 0};
  EXPECT_NEAR(c.precision(), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(c.recall(), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(c.f1(), 2.0 / 3.0, 1e-12);
  const Confusion none{0, 0, 0, 5};
  EXPECT_FALSE(none.f1_defined());
  EXPECT_EQ(none.precision(), 0.0);
}

TEST(Evaluate, MacroAndMicro) {
  const Fixture f;
  const EvaluationReport r = evaluate(f.preds, f.truth);
  EXPECT_EQ(r.pooled, (Confusion{2, 1, 1, 2}));
  EXPECT_NEAR(r.mi_f1, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(r.ma_f1, 0.75, 1e-12);
  ASSERT_EQ(r.per_class.size(), 2u);
  EXPECT_EQ(r.per_class[0].key, "A");
  EXPECT_EQ(r.per_class[1].f1, 0.5);
}

TEST(Evaluate, EmptyClassPolicies) {
  Fixture f;
  f.add_empty_class();
  EvaluationOptions opt;
  EXPECT_NEAR(evaluate(f.preds, f.truth, opt).ma_f1, 0.75, 1e-12);
  opt.empty_class = EmptyClassPolicy::kAsOne;
  EXPECT_NEAR(evaluate(f.preds, f.truth, opt).ma_f1, 2.5 / 3.0, 1e-12);
  opt.empty_class = EmptyClassPolicy::kAsZero;
  EXPECT_NEAR(evaluate(f.preds, f.truth, opt).ma_f1, 0.5, 1e-12);
  // Mi-F1 does not depend on the policy.
  EXPECT_NEAR(evaluate(f.preds, f.truth, opt).mi_f1, 2.0 / 3.0, 1e-12);
}

TEST(Evaluate, BinaryMacro) {
  Fixture f;
  EvaluationOptions opt;
  opt.macro = MacroGrouping::kBinary;
  // Negative class: 2 hits, 1 miss, 1 false alarm -> 2/3, same as positive.
  EXPECT_NEAR(evaluate(f.preds, f.truth, opt).ma_f1, 2.0 / 3.0, 1e-12);
  f.add_empty_class();
  // Negative class now 5/1/1 -> 10/12.
  EXPECT_NEAR(evaluate(f.preds, f.truth, opt).ma_f1, (2.0 / 3.0 + 10.0 / 12.0) / 2, 1e-12);
}

TEST(Evaluate, PermutationInvariant) {
  const Fixture f;
  const EvaluationReport base = evaluate(f.preds, f.truth);
  Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    auto shuffled = f.preds;
    rng.shuffle(std::span(shuffled));
    const EvaluationReport r = evaluate(shuffled, f.truth);
    EXPECT_EQ(r.ma_f1, base.ma_f1);
    EXPECT_EQ(r.mi_f1, base.mi_f1);
    EXPECT_EQ(r.fingerprint, base.fingerprint);
  }
  auto flipped = f.preds;
  flipped[0].decision = false;
  EXPECT_NE(evaluate(flipped, f.truth).fingerprint, base.fingerprint);
}

TEST(Evaluate, MissingTruth) {
  const Fixture f;
  auto preds = f.preds;
  preds.push_back({"D", "x", true});
  EXPECT_THROW(evaluate(preds, f.truth), MissingTruth);
  std::vector<CandidatePair> unlabeled{{"A", "x", Level::kSchema, std::nullopt}};
  EXPECT_THROW(truth_from_pairs(unlabeled), MissingTruth);
}

TEST(Evaluate, NoPositivesAnywhere) {
  const std::vector<PairDecision> preds{{"A", "x", false}};
  const GroundTruth truth{{{"A", "x"}, false}};
  EXPECT_EQ(evaluate(preds, truth).mi_f1, 0.0);
  EXPECT_EQ(evaluate(preds, truth, {EmptyClassPolicy::kAsOne}).mi_f1, 1.0);
}

TEST(Report, JsonAndTable) {
  const Fixture f;
  EvaluationReport r = evaluate(f.preds, f.truth);
  r.config["seed"] = "7";
  std::ostringstream out;
  write_report(r, out);
  const auto j = nlohmann::json::parse(out.str());
  EXPECT_EQ(j.at("format_version"), 1);
  EXPECT_NEAR(j.at("mi_f1").get<double>(), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(j.at("config").at("seed"), "7");
  const std::string table = format_report_table(r);
  EXPECT_NE(table.find("Mi-F1"), std::string::npos);
  EXPECT_NE(table.find("0.6667"), std::string::npos);
  EXPECT_EQ(parse_empty_class_policy("one"), EmptyClassPolicy::kAsOne);
  EXPECT_EQ(parse_macro_grouping("binary"), MacroGrouping::kBinary);
  EXPECT_THROW(parse_macro_grouping("weird"), ConfigError);
}

}  // namespace
}  // namespace etr
